#include "spa/neighbors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spa/errors.hpp"

namespace spa {

std::vector<ClassIndex> build_indexes(const LabeledDataset& train) {
    train.validate();
    const auto labels = train.distinct_labels();
    std::vector<ClassIndex> indexes(labels.size());
    for (std::size_t c = 0; c < labels.size(); ++c) indexes[c].label = labels[c];

    for (Index i = 0; i < train.size(); ++i) {
        const int label = train.labels[static_cast<std::size_t>(i)];
        const auto at = static_cast<std::size_t>(
            std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
        indexes[at].rows.push_back(i);
    }
    for (auto& idx : indexes) {
        if (idx.rows.empty()) {
            throw ValueError("class " + std::to_string(idx.label) + " has no points");
        }
        idx.points.resize(static_cast<Index>(idx.rows.size()), train.dim());
        for (std::size_t i = 0; i < idx.rows.size(); ++i) {
            idx.points.row(static_cast<Index>(i)) = train.features.row(idx.rows[i]);
        }
    }
    return indexes;
}

KnnResult knn_within_class(const ClassIndex& index, const Vector& x, int k) {
    if (x.size() != index.points.cols()) {
        throw DimensionError("query dimension " + std::to_string(x.size()) +
                             " does not match index dimension " +
                             std::to_string(index.points.cols()));
    }
    const Index n = index.size();
    if (k < 1 || k > n) {
        throw ValueError("k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "] for class " +
                         std::to_string(index.label));
    }

    // Exhaustive scan; (squared distance, training row) orders candidates and
    // bakes in the tie rule.
    const Vector sq = (index.points.rowwise() - x.transpose()).rowwise().squaredNorm();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    auto better = [&](Index a, Index b) {
        if (sq[a] != sq[b]) return sq[a] < sq[b];
        return index.rows[static_cast<std::size_t>(a)] < index.rows[static_cast<std::size_t>(b)];
    };
    if (k < n) {
        std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
        order.resize(static_cast<std::size_t>(k));
    }
    std::sort(order.begin(), order.end(), better);

    KnnResult out;
    out.points.resize(k, index.points.cols());
    out.rows.reserve(static_cast<std::size_t>(k));
    out.distances.resize(k);
    for (int i = 0; i < k; ++i) {
        const Index block_row = order[static_cast<std::size_t>(i)];
        out.points.row(i) = index.points.row(block_row);
        out.rows.push_back(index.rows[static_cast<std::size_t>(block_row)]);
        out.distances[i] = std::sqrt(sq[block_row]);
    }
    return out;
}

} // namespace spa
