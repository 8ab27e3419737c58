#include "spa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "spa/errors.hpp"
#include "spa/rng.hpp"
#include "parallel.hpp"

namespace spa {

namespace {

Eigen::MatrixXi empty_confusion(std::size_t classes) {
    return Eigen::MatrixXi::Zero(static_cast<Index>(classes), static_cast<Index>(classes));
}

std::map<int, Index> label_positions(const std::vector<int>& class_labels) {
    std::map<int, Index> at;
    for (std::size_t c = 0; c < class_labels.size(); ++c) {
        at[class_labels[c]] = static_cast<Index>(c);
    }
    return at;
}

} // namespace

EvalReport evaluate(const SpaModel& model, const LabeledDataset& test) {
    test.validate();
    if (test.dim() != model.dim()) {
        throw DimensionError("test dimension " + std::to_string(test.dim()) +
                             " does not match model dimension " +
                             std::to_string(model.dim()));
    }
    const auto& labels = model.class_labels();
    const auto at = label_positions(labels);
    for (int label : test.distinct_labels()) {
        if (!at.count(label)) {
            throw ValueError("test label " + std::to_string(label) +
                             " does not occur in the training set");
        }
    }

    EvalReport report;
    report.class_labels = labels;
    report.config_used = model.config();
    report.n_train = model.train().size();
    report.n_test = test.size();
    report.confusion = empty_confusion(labels.size());

    const auto preds = model.classify_batch(test.features);
    Index correct = 0;
    for (Index i = 0; i < test.size(); ++i) {
        const Index truth = at.at(test.labels[static_cast<std::size_t>(i)]);
        const Index guess = at.at(preds[static_cast<std::size_t>(i)].label);
        report.confusion(truth, guess) += 1;
        if (truth == guess) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return report;
}

std::vector<LearningCurveRow> learning_curve(const LabeledDataset& data,
                                             const std::vector<double>& fractions,
                                             const SpaConfig& config,
                                             int repeats,
                                             std::uint64_t seed) {
    data.validate();
    if (fractions.empty()) throw ValueError("no fractions given");
    for (double f : fractions) {
        if (!(f > 0.0) || !(f < 1.0)) {
            throw ValueError("fraction " + std::to_string(f) + " outside (0, 1)");
        }
    }
    if (repeats < 1) throw ValueError("repeats must be >= 1");

    const auto halves = stratified_split(data, 0.5, Rng::mix(seed, 0));

    std::vector<LearningCurveRow> rows;
    rows.reserve(fractions.size());
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        std::vector<double> accs;
        accs.reserve(static_cast<std::size_t>(repeats));
        Index n_train = 0;
        for (int ri = 0; ri < repeats; ++ri) {
            const std::uint64_t sub_seed =
                Rng::mix(seed, 1 + fi * static_cast<std::size_t>(repeats) +
                                   static_cast<std::size_t>(ri));
            auto sub = stratified_split(halves.train, fractions[fi], sub_seed);
            auto model = SpaModel::fit(std::move(sub.train), config);
            accs.push_back(evaluate(model, halves.test).accuracy);
            n_train = model.train().size();
        }
        LearningCurveRow row;
        row.fraction = fractions[fi];
        row.n_train = n_train;
        row.mean_accuracy =
            std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(repeats);
        if (repeats > 1) {
            double ss = 0.0;
            for (double a : accs) ss += (a - row.mean_accuracy) * (a - row.mean_accuracy);
            row.std_accuracy = std::sqrt(ss / static_cast<double>(repeats - 1));
        }
        rows.push_back(row);
    }
    return rows;
}

BoundResult misclassification_bound(const BoundInputs& inputs) {
    if (!(inputs.delta > 0.0) || !(inputs.sigma > 0.0) || inputs.dim < 1) {
        throw ValueError("misclassification_bound needs delta > 0, sigma > 0 and D >= 1");
    }
    const double ratio = inputs.delta / (2.0 * inputs.sigma);
    const double alpha = ratio * ratio; // delta^2 / (4 sigma^2)
    const double d = static_cast<double>(inputs.dim);
    if (!(alpha > d)) {
        // Optimal Chernoff parameter t* = 1/2 - D/(2 alpha) is not interior;
        // the expression is not a valid bound, so report the trivial one.
        return {1.0, true};
    }
    const double exponent =
        -alpha / 2.0 + (d / 2.0) * std::log(alpha) - (d / 2.0) * (std::log(d) - 1.0);
    return {std::exp(exponent), false};
}

std::vector<SweepRow> bound_vs_error_sweep(CurveFamily family,
                                           const std::vector<double>& sigmas,
                                           int n_per_class,
                                           std::uint64_t seed) {
    if (family != CurveFamily::disjoint_curves) {
        throw ValueError("bound sweep needs a family with known separation "
                         "(disjoint-curves)");
    }
    if (sigmas.empty()) throw ValueError("no sigma values given");
    // Half the known separation keeps the delta-neighborhoods of the two
    // supports disjoint, so the overlap term of the bound vanishes.
    const double delta = disjoint_curve_separation() / 2.0;

    std::vector<SweepRow> rows;
    rows.reserve(sigmas.size());
    for (double sigma : sigmas) {
        if (sigma < 0.0) throw ValueError("sigma must be >= 0");
        SynthSpec spec;
        spec.family = family;
        spec.n_per_class = n_per_class;
        spec.sigma = sigma;
        spec.seed = seed; // shared support draws pair the rows across sigmas
        auto data = generate(spec);
        auto split = stratified_split(data, 0.5, Rng::mix(seed, 0xB0));
        SpaConfig config;
        config.p = 1;
        auto model = SpaModel::fit(std::move(split.train), config);
        const auto report = evaluate(model, split.test);

        SweepRow row;
        row.sigma = sigma;
        row.empirical_error = 1.0 - report.accuracy;
        if (sigma > 0.0) {
            const auto bound = misclassification_bound({delta, sigma, spec.ambient_dim});
            row.bound = bound.value;
            row.bound_trivial = bound.trivial;
        } else {
            row.bound = 0.0; // noiseless regime: the limit error is zero
            row.bound_trivial = false;
        }
        rows.push_back(row);
    }
    return rows;
}

EvalReport knn_baseline(const LabeledDataset& train, const LabeledDataset& test,
                        int k) {
    train.validate();
    test.validate();
    if (test.dim() != train.dim()) {
        throw DimensionError("test dimension does not match training dimension");
    }
    if (k < 1 || k > train.size()) {
        throw ValueError("k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(train.size()) + "]");
    }
    const auto labels = train.distinct_labels();
    const auto at = label_positions(labels);
    for (int label : test.distinct_labels()) {
        if (!at.count(label)) {
            throw ValueError("test label " + std::to_string(label) +
                             " does not occur in the training set");
        }
    }

    std::vector<int> votes(static_cast<std::size_t>(test.size()));
    detail::parallel_for(static_cast<std::size_t>(test.size()), [&](std::size_t i) {
        const Vector x = test.features.row(static_cast<Index>(i)).transpose();
        const Vector sq = (train.features.rowwise() - x.transpose()).rowwise().squaredNorm();
        std::vector<Index> order(static_cast<std::size_t>(train.size()));
        std::iota(order.begin(), order.end(), Index{0});
        auto better = [&](Index a, Index b) {
            if (sq[a] != sq[b]) return sq[a] < sq[b];
            return a < b;
        };
        if (k < train.size()) {
            std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
        }
        std::map<int, int> counts;
        for (int j = 0; j < k; ++j) {
            counts[train.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])]]++;
        }
        int best_label = counts.begin()->first;
        int best_count = counts.begin()->second;
        for (const auto& [label, count] : counts) { // map order: lower label first
            if (count > best_count) {
                best_label = label;
                best_count = count;
            }
        }
        votes[i] = best_label;
    });

    EvalReport report;
    report.class_labels = labels;
    report.config_used.k = k;
    report.config_used.p = 0; // not a sphere fit
    report.n_train = train.size();
    report.n_test = test.size();
    report.confusion = empty_confusion(labels.size());
    Index correct = 0;
    for (Index i = 0; i < test.size(); ++i) {
        const Index truth = at.at(test.labels[static_cast<std::size_t>(i)]);
        const Index guess = at.at(votes[static_cast<std::size_t>(i)]);
        report.confusion(truth, guess) += 1;
        if (truth == guess) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());
    return report;
}

} // namespace spa
