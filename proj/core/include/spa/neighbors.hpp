#pragma once

#include <vector>

#include "spa/dataset.hpp"
#include "spa/types.hpp"

namespace spa {

// Exact per-class nearest-neighbor index. Class points are copied into a
// contiguous block for scan speed; rows maps block rows back to training rows.
// Immutable after build; concurrent queries are safe.
struct ClassIndex {
    int label = 0; // original label value
    Matrix points; // n_l x D
    std::vector<Index> rows; // ascending training-row indices

    Index size() const { return points.rows(); }
};

// One index per distinct label, ordered by ascending label value. Their row
// sets partition the training set.
std::vector<ClassIndex> build_indexes(const LabeledDataset& train);

struct KnnResult {
    Matrix points;             // k x D, nondecreasing distance order
    std::vector<Index> rows;   // matching training-row indices
    Vector distances;          // Euclidean
};

// The k nearest points of the class under Euclidean distance. Ties at the
// k-th distance are broken by lower training-row index.
KnnResult knn_within_class(const ClassIndex& index, const Vector& x, int k);

} // namespace spa
