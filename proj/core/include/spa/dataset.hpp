#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spa/types.hpp"

namespace spa {

// Feature matrix with one integer label per row. Labels stay in the caller's
// original label space; the classifier remaps them to a contiguous 1..L
// internally. When a CSV carried string categories, label_names holds the
// code -> name map (codes are 1..L in lexicographic name order) and write_csv
// emits the names again.
struct LabeledDataset {
    Matrix features; // n x D
    std::vector<int> labels;
    std::string name;
    std::map<int, std::string> label_names;

    Index size() const { return features.rows(); }
    Index dim() const { return features.cols(); }

    // Sorted distinct label values.
    std::vector<int> distinct_labels() const;
    // Count of rows carrying `label`.
    Index class_count(int label) const;
    // Smallest class size.
    Index min_class_count() const;
    // Throws unless n >= 1, D >= 1, labels.size() == n and all values finite.
    void validate() const;
};

enum class LabelColumn { first, last };

// CSV: comma-separated, UTF-8, '.' decimal point. An optional header row is
// autodetected (first row whose label/feature cells are not all numeric).
// Feature cells must parse as finite doubles; the label cell may be an
// integer or a string category.
LabeledDataset load_csv(const std::string& path, LabelColumn label_column);

// Writes features with 17 significant digits so load_csv round-trips exactly.
void write_csv(const LabeledDataset& data, const std::string& path,
               LabelColumn label_column);

// The exact bytes write_csv would produce.
std::string dataset_csv(const LabeledDataset& data, LabelColumn label_column);

// Label-free CSV of feature rows (for prediction queries). Header rows are
// autodetected as in load_csv.
Matrix load_matrix_csv(const std::string& path);

// USPS digits layout: label (0..9) followed by 256 pixel columns in [0, 255].
LabeledDataset load_usps(const std::string& path);

enum class CurveFamily { funky_curves, concentric_spheres, disjoint_curves };

CurveFamily parse_family(std::string_view name); // throws ValueError
std::string family_name(CurveFamily family);

// Synthetic data: noiseless points z on per-class supports plus isotropic
// Gaussian noise with per-coordinate std sigma. Deterministic given seed.
struct SynthSpec {
    CurveFamily family = CurveFamily::funky_curves;
    int n_per_class = 100;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int ambient_dim = 2;
    int classes = 2; // concentric_spheres only; curve families fix their own
};

LabeledDataset generate(const SynthSpec& spec);

// Noiseless generator support, exposed for tests and separation diagnostics:
// point on class-l support of `family` at parameter t in [0, 2pi).
Vector curve_point(CurveFamily family, int label, double t, int ambient_dim);

// Exact minimum distance between the two class supports of disjoint_curves
// (the only family with a known positive separation).
double disjoint_curve_separation();

struct SplitResult {
    LabeledDataset train;
    LabeledDataset test;
};

// Per-class proportional split, largest-remainder rounding, deterministic
// shuffle per class. Throws if any class would get zero training points.
SplitResult stratified_split(const LabeledDataset& data, double train_fraction,
                             std::uint64_t seed);

} // namespace spa
