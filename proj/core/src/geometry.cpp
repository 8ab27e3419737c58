#include "spa/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "spa/errors.hpp"

namespace spa {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kConditionLimit = 1e12;
constexpr double kPinvCutoffFactor = 1e-10;

void require_finite(const Matrix& points) {
    if (!points.allFinite()) {
        throw NumericError("point set contains non-finite values");
    }
}

} // namespace

void Sphere::validate() const {
    const Index sub = basis.cols();
    if (basis.rows() != center.size() || basis.rows() != origin.size()) {
        throw DimensionError("sphere fields disagree on the ambient dimension");
    }
    const Matrix gram = basis.transpose() * basis;
    if ((gram - Matrix::Identity(sub, sub)).cwiseAbs().maxCoeff() > kOrthoTol) {
        throw NumericError("sphere basis is not orthonormal");
    }
    if (!(radius > 0.0) && !rank_deficient) {
        throw NumericError("sphere radius is not positive");
    }
    const Vector off = center - origin;
    const Vector out_of_plane = off - basis * (basis.transpose() * off);
    if (out_of_plane.norm() > 1e-8 * (1.0 + center.norm())) {
        throw NumericError("sphere center left the affine subspace");
    }
}

namespace {

// Deterministic sign: largest-magnitude entry positive (lowest index wins on
// magnitude ties).
void fix_sign(Eigen::Ref<Vector> column) {
    Index at = 0;
    double best = -1.0;
    for (Index i = 0; i < column.size(); ++i) {
        const double mag = std::abs(column[i]);
        if (mag > best) {
            best = mag;
            at = i;
        }
    }
    if (column[at] < 0.0) column = -column;
}

} // namespace

PrincipalSubspace principal_subspace(const Matrix& points, int k) {
    const Index n = points.rows();
    const Index dim = points.cols();
    if (n < 2) {
        throw DimensionError("principal_subspace needs at least 2 points, got " +
                             std::to_string(n));
    }
    if (k < 1 || k > std::min<Index>(n - 1, dim)) {
        throw DimensionError("subspace dimension " + std::to_string(k) +
                             " outside [1, min(n-1, D)] with n=" + std::to_string(n) +
                             " D=" + std::to_string(dim));
    }
    require_finite(points);

    const Vector mean = points.colwise().mean();
    const Matrix centered = points.rowwise() - mean.transpose();

    PrincipalSubspace out;
    out.mean = mean;
    out.basis.resize(dim, k);
    out.eigenvalues.resize(k);

    if (dim > n) {
        // Few points in a high-dimensional space: the covariance has rank
        // < n, so the same eigenpairs come cheaper from the n x n Gram
        // matrix; v_j = Xc^T w_j / |Xc^T w_j|.
        const Matrix gram = (centered * centered.transpose()) / static_cast<double>(n - 1);
        if (!gram.allFinite()) {
            throw NumericError("covariance computation produced non-finite entries");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
        if (solver.info() == Eigen::Success &&
            solver.eigenvalues()[n - k] > 1e-12 * std::max(solver.eigenvalues()[n - 1], 0.0)) {
            for (int j = 0; j < k; ++j) {
                const Index src = n - 1 - j;
                Vector col = centered.transpose() * solver.eigenvectors().col(src);
                col /= col.norm();
                fix_sign(col);
                out.basis.col(j) = col;
                out.eigenvalues[j] = solver.eigenvalues()[src];
            }
            return out;
        }
        // rank-deficient at the requested k: fall through to the dense route,
        // whose eigenbasis stays orthonormal in the null space
    }

    const Matrix cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    if (!cov.allFinite()) {
        throw NumericError("covariance computation produced non-finite entries");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the covariance failed");
    }
    // Eigen sorts ascending; take the top k in decreasing order.
    for (int j = 0; j < k; ++j) {
        const Index src = dim - 1 - j;
        Vector col = solver.eigenvectors().col(src);
        fix_sign(col);
        out.basis.col(j) = col;
        out.eigenvalues[j] = solver.eigenvalues()[src];
    }
    return out;
}

Sphere spca_fit(const Matrix& points, int p, SingularPolicy policy) {
    const Index n = points.rows();
    const Index dim = points.cols();
    if (p < 1) {
        throw DimensionError("sphere dimension p must be >= 1, got " + std::to_string(p));
    }
    if (n < p + 2) {
        throw InsufficientPointsError("fitting a " + std::to_string(p) +
                                      "-sphere needs at least " + std::to_string(p + 2) +
                                      " points, got " + std::to_string(n));
    }
    if (p + 1 > std::min<Index>(n - 1, dim)) {
        throw DimensionError("p+1 = " + std::to_string(p + 1) +
                             " exceeds min(n-1, D) with n=" + std::to_string(n) +
                             " D=" + std::to_string(dim));
    }

    const PrincipalSubspace sub = principal_subspace(points, p + 1);
    const Index k = p + 1;

    // Local coordinates of the projected points: u_i = V^T (x_i - mean).
    // The projected points are xi_i = mean + V u_i, so the whole center solve
    // restricts to R^{p+1}, where the scatter matrix is generically
    // invertible.
    const Matrix u = (points.rowwise() - sub.mean.transpose()) * sub.basis; // n x k
    const Vector u_mean = u.colwise().mean();
    const Matrix u_centered = u.rowwise() - u_mean.transpose();

    // Normal equations of the algebraic sphere fit: for each i,
    //   2 c^T (u_i - u_mean) = |u_i|^2 - avg_j |u_j|^2,
    // solved in least squares: 2 (Uc^T Uc) c = Uc^T q.
    Vector sq = u.rowwise().squaredNorm();
    sq.array() -= sq.mean();
    const Matrix scatter = u_centered.transpose() * u_centered; // k x k
    const Vector rhs = u_centered.transpose() * sq;

    Eigen::SelfAdjointEigenSolver<Matrix> solver(scatter);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition of the local scatter failed");
    }
    const Vector& lambda = solver.eigenvalues(); // ascending, >= 0 up to rounding
    const double lambda_max = lambda[k - 1];
    const double lambda_min = lambda[0];

    bool rank_deficient = false;
    Vector center_local(k);
    if (lambda_max > 0.0 && lambda_min > lambda_max / kConditionLimit) {
        center_local = 0.5 * solver.eigenvectors() *
                       (solver.eigenvectors().transpose() * rhs).cwiseQuotient(lambda);
    } else {
        // Ill-conditioned scatter: minimum-norm solution with singular values
        // below 1e-10 * sigma_max dropped.
        rank_deficient = true;
        if (policy == SingularPolicy::strict) {
            throw SingularFitError(
                "local scatter matrix is rank-deficient; sphere center is not unique");
        }
        const double cutoff = kPinvCutoffFactor * lambda_max;
        Vector coeffs = solver.eigenvectors().transpose() * rhs;
        for (Index j = 0; j < k; ++j) {
            coeffs[j] = lambda[j] > cutoff ? coeffs[j] / lambda[j] : 0.0;
        }
        center_local = 0.5 * solver.eigenvectors() * coeffs;
    }

    Sphere sphere;
    sphere.basis = sub.basis;
    sphere.origin = sub.mean;
    sphere.center = sub.mean + sub.basis * center_local;
    sphere.radius = (u.rowwise() - center_local.transpose()).rowwise().norm().mean();
    sphere.rank_deficient = rank_deficient;
    return sphere;
}

SphereQueryResult project_to_sphere(const Sphere& sphere, const Vector& x) {
    if (x.size() != sphere.basis.rows()) {
        throw DimensionError("query dimension " + std::to_string(x.size()) +
                             " does not match sphere ambient dimension " +
                             std::to_string(sphere.basis.rows()));
    }
    if (!x.allFinite()) {
        throw NumericError("query point contains non-finite values");
    }

    const Vector offset = x - sphere.center;
    const Vector in_plane = sphere.basis * (sphere.basis.transpose() * offset);
    const double in_norm = in_plane.norm();
    const double eps_degenerate = 1e-12 * (1.0 + offset.norm());

    SphereQueryResult result;
    if (in_norm > eps_degenerate) {
        result.projection = sphere.center + (sphere.radius / in_norm) * in_plane;
        result.distance = (x - result.projection).norm();
        result.degenerate = false;
    } else {
        // Every sphere point is equidistant; the distance is exact and the
        // representative projection is fixed for determinism.
        result.distance = std::sqrt(offset.squaredNorm() + sphere.radius * sphere.radius);
        result.projection = sphere.center + sphere.radius * sphere.basis.col(0);
        result.degenerate = true;
    }
    return result;
}

} // namespace spa
