#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spa/dataset.hpp"
#include "spa/neighbors.hpp"
#include "spa/types.hpp"

namespace spa {

// Tuning parameters. Leaving k or p unset means "auto": k becomes
// clamp(ceil(sqrt(n_min)), p+2, n_min) over the smallest class, p is chosen
// from p_grid by stratified cross-validation.
struct SpaConfig {
    std::optional<int> k;
    std::optional<int> p;
    std::vector<int> p_grid = {1, 2, 3};
    int cv_folds = 5;
    std::uint64_t cv_seed = 0;
};

struct ResolvedConfig {
    int k = 0;
    int p = 0;
    bool k_clamped = false; // an explicit k was capped to the smallest class
};

// Validates and resolves "auto" values against the training set.
ResolvedConfig resolve_config(const SpaConfig& config, const LabeledDataset& train);

// Stratified cv_folds-fold cross-validation over p_grid; the held-out fold is
// not part of the neighbor search. Ties go to the smaller p.
int tune_p(const LabeledDataset& train, const SpaConfig& config);

struct Prediction {
    int label = 0;               // original label space
    Vector distances;            // d_l per class, ascending-label order
    std::vector<bool> degenerate; // per-class degenerate-projection flags
};

// The SPA classifier. A lazy learner: fitting stores the training data and
// per-class indexes; every query fits one local sphere per class from the
// query's K nearest same-class neighbors and takes the argmin distance.
// Immutable after construction and safe to share across threads.
class SpaModel {
public:
    static SpaModel fit(LabeledDataset train, const SpaConfig& config);

    Prediction classify(const Vector& x) const;
    // Elementwise classify over rows, input order preserved. Fans out across
    // worker threads (SPA_THREADS overrides the default count).
    std::vector<Prediction> classify_batch(const Matrix& queries) const;

    const LabeledDataset& train() const { return train_; }
    const ResolvedConfig& config() const { return config_; }
    const std::vector<ClassIndex>& indexes() const { return indexes_; }
    // Internal class l (0-based) -> original label.
    const std::vector<int>& class_labels() const { return class_labels_; }
    Index num_classes() const { return static_cast<Index>(indexes_.size()); }
    Index dim() const { return train_.dim(); }

private:
    SpaModel() = default;

    LabeledDataset train_;
    ResolvedConfig config_;
    std::vector<ClassIndex> indexes_;
    std::vector<int> class_labels_;
};

} // namespace spa
