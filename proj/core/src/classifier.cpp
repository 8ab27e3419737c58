#include "spa/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spa/errors.hpp"
#include "spa/geometry.hpp"
#include "spa/rng.hpp"
#include "parallel.hpp"

namespace spa {

namespace {

int auto_k(Index n_min, int p) {
    const int root = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_min))));
    return std::clamp(root, p + 2, static_cast<int>(n_min));
}

void check_p(int p, Index dim, Index n_min) {
    if (p < 1) throw ValueError("p must be >= 1, got " + std::to_string(p));
    if (p + 1 > dim) {
        throw ValueError("p+1 = " + std::to_string(p + 1) +
                         " exceeds the ambient dimension " + std::to_string(dim));
    }
    if (p + 2 > n_min) {
        throw ValueError("p = " + std::to_string(p) + " needs " + std::to_string(p + 2) +
                         " points per class but the smallest class has " +
                         std::to_string(n_min));
    }
}

} // namespace

ResolvedConfig resolve_config(const SpaConfig& config, const LabeledDataset& train) {
    train.validate();
    const Index n_min = train.min_class_count();
    if (n_min < 3) {
        throw ValueError("smallest class has " + std::to_string(n_min) +
                         " points; at least 3 are required");
    }

    ResolvedConfig resolved;
    resolved.p = config.p ? *config.p : tune_p(train, config);
    check_p(resolved.p, train.dim(), n_min);

    if (config.k) {
        if (*config.k < resolved.p + 2) {
            throw ValueError("K = " + std::to_string(*config.k) +
                             " is below the minimum p+2 = " + std::to_string(resolved.p + 2));
        }
        resolved.k = *config.k;
        if (resolved.k > n_min) {
            resolved.k = static_cast<int>(n_min);
            resolved.k_clamped = true;
        }
    } else {
        resolved.k = auto_k(n_min, resolved.p);
    }
    return resolved;
}

int tune_p(const LabeledDataset& train, const SpaConfig& config) {
    train.validate();
    if (config.p_grid.empty()) throw ValueError("p_grid is empty");
    if (config.cv_folds < 2) throw ValueError("cv_folds must be >= 2");
    const Index n_min = train.min_class_count();
    const Index dim = train.dim();

    std::vector<int> candidates;
    for (int p : config.p_grid) {
        if (p >= 1 && p + 1 <= dim && p + 2 <= n_min) candidates.push_back(p);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) {
        throw ValueError("no p in the grid satisfies p+2 <= " + std::to_string(n_min) +
                         " and p+1 <= " + std::to_string(dim));
    }
    if (candidates.size() == 1) return candidates.front();

    if (n_min < config.cv_folds) {
        throw ValueError("each class needs at least cv_folds = " +
                         std::to_string(config.cv_folds) + " points");
    }

    // Stratified fold assignment: per class, shuffled rows dealt round-robin.
    const auto labels = train.distinct_labels();
    const int folds = config.cv_folds;
    std::vector<int> fold_of(static_cast<std::size_t>(train.size()), 0);
    for (std::size_t c = 0; c < labels.size(); ++c) {
        std::vector<Index> rows;
        for (Index i = 0; i < train.size(); ++i) {
            if (train.labels[static_cast<std::size_t>(i)] == labels[c]) rows.push_back(i);
        }
        Rng rng = Rng::derive(config.cv_seed, c);
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            fold_of[static_cast<std::size_t>(rows[i])] = static_cast<int>(i % folds);
        }
    }

    double best_acc = -1.0;
    int best_p = candidates.front();
    for (int p : candidates) {
        double acc_sum = 0.0;
        int usable_folds = 0;
        bool feasible = true;
        for (int f = 0; f < folds && feasible; ++f) {
            LabeledDataset fit_part, held;
            std::vector<Index> fit_rows, held_rows;
            for (Index i = 0; i < train.size(); ++i) {
                (fold_of[static_cast<std::size_t>(i)] == f ? held_rows : fit_rows).push_back(i);
            }
            auto take = [&](const std::vector<Index>& rows) {
                LabeledDataset out;
                out.features.resize(static_cast<Index>(rows.size()), dim);
                Index at = 0;
                for (Index r : rows) {
                    out.features.row(at++) = train.features.row(r);
                    out.labels.push_back(train.labels[static_cast<std::size_t>(r)]);
                }
                return out;
            };
            fit_part = take(fit_rows);
            held = take(held_rows);

            SpaConfig fold_config = config;
            fold_config.p = p;
            try {
                const SpaModel model = SpaModel::fit(std::move(fit_part), fold_config);
                const auto preds = model.classify_batch(held.features);
                Index correct = 0;
                for (Index i = 0; i < held.size(); ++i) {
                    if (preds[static_cast<std::size_t>(i)].label ==
                        held.labels[static_cast<std::size_t>(i)]) ++correct;
                }
                acc_sum += static_cast<double>(correct) / static_cast<double>(held.size());
                ++usable_folds;
            } catch (const ValueError&) {
                feasible = false; // p too large for this fold's class sizes
            }
        }
        if (!feasible || usable_folds == 0) continue;
        const double acc = acc_sum / usable_folds;
        if (acc > best_acc) { // strict: ties keep the smaller p
            best_acc = acc;
            best_p = p;
        }
    }
    if (best_acc < 0.0) {
        throw ValueError("cross-validation was infeasible for every candidate p");
    }
    return best_p;
}

SpaModel SpaModel::fit(LabeledDataset train, const SpaConfig& config) {
    SpaModel model;
    model.config_ = resolve_config(config, train);
    model.train_ = std::move(train);
    model.indexes_ = build_indexes(model.train_);
    model.class_labels_.reserve(model.indexes_.size());
    for (const auto& idx : model.indexes_) model.class_labels_.push_back(idx.label);
    return model;
}

Prediction SpaModel::classify(const Vector& x) const {
    if (x.size() != dim()) {
        throw DimensionError("query dimension " + std::to_string(x.size()) +
                             " does not match training dimension " + std::to_string(dim()));
    }
    const Index classes = num_classes();
    Prediction pred;
    pred.distances.resize(classes);
    pred.degenerate.resize(static_cast<std::size_t>(classes), false);

    Index best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < classes; ++c) {
        const auto nbrs = knn_within_class(indexes_[static_cast<std::size_t>(c)], x, config_.k);
        const Sphere sphere = spca_fit(nbrs.points, config_.p, SingularPolicy::fallback);
        const auto result = project_to_sphere(sphere, x);
        pred.distances[c] = result.distance;
        pred.degenerate[static_cast<std::size_t>(c)] = result.degenerate;
        if (result.distance < best_distance) { // ties keep the lowest class
            best_distance = result.distance;
            best = c;
        }
    }
    pred.label = class_labels_[static_cast<std::size_t>(best)];
    return pred;
}

std::vector<Prediction> SpaModel::classify_batch(const Matrix& queries) const {
    if (queries.rows() > 0 && queries.cols() != dim()) {
        throw DimensionError("query dimension " + std::to_string(queries.cols()) +
                             " does not match training dimension " + std::to_string(dim()));
    }
    std::vector<Prediction> out(static_cast<std::size_t>(queries.rows()));
    detail::parallel_for(out.size(), [&](std::size_t i) {
        out[i] = classify(queries.row(static_cast<Index>(i)).transpose());
    });
    return out;
}

} // namespace spa
