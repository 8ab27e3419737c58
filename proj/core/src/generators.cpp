#include <cmath>
#include <numbers>
#include <string>

#include "spa/dataset.hpp"
#include "spa/errors.hpp"
#include "spa/rng.hpp"

namespace spa {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Funky curves: three harmonically perturbed circles in [-1,1]^2, one per
// class, with distinct radial frequencies. Class l is
//   center_l + r_l(t) (cos t, sin t),
//   r_l(t) = 0.72 + 0.06 cos(f_l t + phi_l),
//   f = {2, 3, 4}, phi = {0.3, 1.4, 2.6},
//   center_l = 0.20 (cos(2 pi (l-1)/3), sin(2 pi (l-1)/3)).
// Each curve is a simple closed curve (r > 0 and single-valued in t, so no
// self-intersections, keeping each class support a manifold) and any two
// curves cross transversally at finitely many points, which entangles the
// classes.
Eigen::Vector2d funky_curve(int label, double t) {
    static constexpr double kFreq[3] = {2.0, 3.0, 4.0};
    static constexpr double kPhase[3] = {0.3, 1.4, 2.6};
    if (label < 1 || label > 3) {
        throw ValueError("funky curves define classes 1..3");
    }
    const double center_angle = 2.0 * std::numbers::pi * (label - 1) / 3.0;
    const double r = 0.72 + 0.06 * std::cos(kFreq[label - 1] * t + kPhase[label - 1]);
    return {0.20 * std::cos(center_angle) + r * std::cos(t),
            0.20 * std::sin(center_angle) + r * std::sin(t)};
}

// Disjoint curves: two congruent ellipses (semi-axes 1 and 0.5) centered at
// (0, +1) and (0, -1). Their closest points are (0, 0.5) and (0, -0.5), so
// the minimum separation is exactly 1.
Eigen::Vector2d disjoint_curve(int label, double t) {
    switch (label) {
        case 1: return {std::cos(t), 1.0 + 0.5 * std::sin(t)};
        case 2: return {std::cos(t), -1.0 + 0.5 * std::sin(t)};
        default: throw ValueError("disjoint curves define classes 1..2");
    }
}

} // namespace

double disjoint_curve_separation() { return 1.0; }

CurveFamily parse_family(std::string_view name) {
    if (name == "funky-curves") return CurveFamily::funky_curves;
    if (name == "concentric-spheres") return CurveFamily::concentric_spheres;
    if (name == "disjoint-curves") return CurveFamily::disjoint_curves;
    throw ValueError("unknown curve family '" + std::string(name) +
                     "' (expected funky-curves, concentric-spheres or disjoint-curves)");
}

std::string family_name(CurveFamily family) {
    switch (family) {
        case CurveFamily::funky_curves: return "funky-curves";
        case CurveFamily::concentric_spheres: return "concentric-spheres";
        case CurveFamily::disjoint_curves: return "disjoint-curves";
    }
    throw ValueError("unknown curve family value");
}

Vector curve_point(CurveFamily family, int label, double t, int ambient_dim) {
    if (ambient_dim < 2) {
        throw DimensionError("curve families need ambient dimension >= 2");
    }
    Eigen::Vector2d planar;
    switch (family) {
        case CurveFamily::funky_curves: planar = funky_curve(label, t); break;
        case CurveFamily::disjoint_curves: planar = disjoint_curve(label, t); break;
        case CurveFamily::concentric_spheres:
            throw ValueError("concentric-spheres has no curve parametrization");
    }
    Vector out = Vector::Zero(ambient_dim);
    out[0] = planar[0];
    out[1] = planar[1];
    return out;
}

LabeledDataset generate(const SynthSpec& spec) {
    if (spec.n_per_class < 1) throw ValueError("n_per_class must be >= 1");
    if (spec.sigma < 0.0) throw ValueError("sigma must be >= 0");
    if (spec.ambient_dim < 1) throw ValueError("ambient dimension must be >= 1");

    int classes = 0;
    switch (spec.family) {
        case CurveFamily::funky_curves: classes = 3; break;
        case CurveFamily::disjoint_curves: classes = 2; break;
        case CurveFamily::concentric_spheres:
            if (spec.classes < 1) throw ValueError("classes must be >= 1");
            classes = spec.classes;
            break;
    }
    const int dim = spec.ambient_dim;
    if (spec.family != CurveFamily::concentric_spheres && dim < 2) {
        throw DimensionError("curve families need ambient dimension >= 2");
    }

    LabeledDataset data;
    data.name = family_name(spec.family);
    data.features.resize(static_cast<Index>(classes) * spec.n_per_class, dim);
    data.labels.reserve(static_cast<std::size_t>(data.features.rows()));

    // Stream discipline: class l uses substream 2l for support draws and
    // 2l+1 for noise, so the noiseless locations do not depend on sigma.
    Index row = 0;
    for (int label = 1; label <= classes; ++label) {
        Rng support_rng = Rng::derive(spec.seed, 2 * static_cast<std::uint64_t>(label));
        Rng noise_rng = Rng::derive(spec.seed, 2 * static_cast<std::uint64_t>(label) + 1);
        for (int i = 0; i < spec.n_per_class; ++i, ++row) {
            Vector z;
            if (spec.family == CurveFamily::concentric_spheres) {
                Vector direction(dim);
                double norm = 0.0;
                do {
                    for (int j = 0; j < dim; ++j) direction[j] = support_rng.normal();
                    norm = direction.norm();
                } while (norm == 0.0);
                z = direction * (static_cast<double>(label) / norm);
            } else {
                const double t = support_rng.uniform(0.0, kTwoPi);
                z = curve_point(spec.family, label, t, dim);
            }
            if (spec.sigma > 0.0) {
                for (int j = 0; j < dim; ++j) z[j] += spec.sigma * noise_rng.normal();
            }
            data.features.row(row) = z.transpose();
            data.labels.push_back(label);
        }
    }
    return data;
}

} // namespace spa
