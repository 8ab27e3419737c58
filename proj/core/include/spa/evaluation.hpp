#pragma once

#include <cstdint>
#include <vector>

#include "spa/classifier.hpp"
#include "spa/dataset.hpp"
#include "spa/types.hpp"

namespace spa {

struct EvalReport {
    double accuracy = 0.0;
    // confusion(i, j): true class i predicted as class j, ascending-label
    // order on both axes; entries sum to n_test.
    Eigen::MatrixXi confusion;
    Index n_train = 0;
    Index n_test = 0;
    ResolvedConfig config_used;
    std::vector<int> class_labels;
};

// Classifies every test row. Test labels must all occur in the training set.
EvalReport evaluate(const SpaModel& model, const LabeledDataset& test);

struct LearningCurveRow {
    double fraction = 0.0;
    Index n_train = 0;      // rounded mean training size across repeats
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0; // sample std, 0 when repeats == 1
};

// Paper-style protocol: half the data is held out once as the test set; for
// each fraction and repeat, that fraction of the training half is drawn by
// stratified subsampling and evaluated on the fixed test half.
//
// Seeding is part of the contract: the half split uses Rng::mix(seed, 0) and
// the subsample for fraction index fi, repeat ri uses
// Rng::mix(seed, 1 + fi * repeats + ri), so rows are reproducible from the
// public stratified_split API.
std::vector<LearningCurveRow> learning_curve(const LabeledDataset& data,
                                             const std::vector<double>& fractions,
                                             const SpaConfig& config,
                                             int repeats,
                                             std::uint64_t seed);

struct BoundInputs {
    double delta = 0.0; // separation scale, > 0
    double sigma = 0.0; // noise std, > 0
    int dim = 0;        // ambient dimension D, >= 1
};

struct BoundResult {
    double value = 1.0;
    bool trivial = false; // outside the Chernoff regime delta^2/(4 sigma^2) > D
};

// Asymptotic misclassification bound
//   exp{ -delta^2/(8 sigma^2) + (D/2) log(delta^2/(4 sigma^2))
//        - (D/2)(log D - 1) },
// evaluated in log space. The optimal Chernoff parameter is interior only
// when delta^2/(4 sigma^2) > D; outside that regime the trivial bound 1 is
// returned with the flag set.
BoundResult misclassification_bound(const BoundInputs& inputs);

struct SweepRow {
    double sigma = 0.0;
    double empirical_error = 0.0;
    double bound = 1.0;
    bool bound_trivial = false;
};

// For each sigma: generate the family at that noise level, split in half,
// evaluate SPA, and pair the empirical error with misclassification_bound at
// delta = separation / 2 (so the supports' delta-neighborhoods are disjoint).
// Only families with known separation are accepted (disjoint_curves).
std::vector<SweepRow> bound_vs_error_sweep(CurveFamily family,
                                           const std::vector<double>& sigmas,
                                           int n_per_class,
                                           std::uint64_t seed);

// Plain majority-vote KNN over the whole training set, for comparison rows.
// Neighbor ties break by lower training row, vote ties by lower label.
EvalReport knn_baseline(const LabeledDataset& train, const LabeledDataset& test,
                        int k);

} // namespace spa
