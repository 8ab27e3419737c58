#pragma once

#include "spa/types.hpp"

namespace spa {

// A p-dimensional sphere embedded in D-dimensional space. The sphere lives in
// the affine subspace {origin + basis * u}; basis is D x (p+1) with
// orthonormal columns, center lies in that subspace and radius is positive.
//
// rank_deficient marks spheres whose center solve fell back to a minimum-norm
// pseudo-inverse solution (degenerate neighbor configuration); distances from
// such spheres are still well-defined and deterministic.
struct Sphere {
    Matrix basis;  // D x (p+1)
    Vector center; // D
    double radius = 0.0;
    Vector origin; // D, the sample mean anchoring the subspace
    bool rank_deficient = false;

    Index ambient_dim() const { return basis.rows(); }
    Index subspace_dim() const { return basis.cols(); } // p+1

    // Throws unless the orthonormality / positivity / affine-membership
    // invariants hold. Intended for tests and debugging.
    void validate() const;
};

struct SphereQueryResult {
    Vector projection; // nearest sphere point (a representative when degenerate)
    double distance = 0.0;
    bool degenerate = false; // in-subspace offset from the center vanished
};

struct PrincipalSubspace {
    Matrix basis; // D x k, orthonormal columns, decreasing eigenvalue order
    Vector mean;  // D
    Vector eigenvalues; // k, decreasing
};

// Top-k eigenvectors of the sample covariance of `points` (rows are samples),
// plus the sample mean. Columns are ordered by decreasing eigenvalue and each
// column's sign is fixed so its largest-magnitude entry is positive.
PrincipalSubspace principal_subspace(const Matrix& points, int k);

enum class SingularPolicy {
    fallback, // minimum-norm center via pseudo-inverse, flag the sphere
    strict,   // throw SingularFitError when the center is not unique
};

// Fits a p-sphere: basis from principal_subspace(points, p+1), center from
// the least-squares normal equations solved in the (p+1)-dim local
// coordinates, radius = mean distance of the projected points to the center.
// Requires n >= p+2 and p+1 <= min(n-1, D).
Sphere spca_fit(const Matrix& points, int p,
                SingularPolicy policy = SingularPolicy::fallback);

// Nearest point on the sphere and its distance. When the in-subspace offset
// w = VV^T(x - c) is numerically zero every sphere point is equidistant; the
// distance sqrt(|x-c|^2 + r^2) is exact and the reported projection is the
// fixed representative c + r * v1.
SphereQueryResult project_to_sphere(const Sphere& sphere, const Vector& x);

inline double distance_to_sphere(const Sphere& sphere, const Vector& x) {
    return project_to_sphere(sphere, x).distance;
}

} // namespace spa
