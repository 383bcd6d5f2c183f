#include "cleandec/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "cleandec/errors.hpp"
#include "lapack_svd.hpp"

namespace cleandec {

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw InputError(std::string(what) + ": matrix has non-finite entries");
    }
}

void require_square(const Matrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InputError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_same_size(const Matrix& a, const Matrix& b, std::string_view what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError(std::string(what) + ": dimension mismatch");
    }
}

double default_rank_tol(Index n) { return static_cast<double>(std::max<Index>(n, 1)) * std::ldexp(1.0, -44); }

RealVector singular_values(const Matrix& m) {
    if (m.size() == 0) return RealVector(0);
    return detail::lapack_svd(m, detail::SvdVectors::None).sigma;
}

double operator_norm(const Matrix& m) {
    require_finite(m, "operator_norm");
    if (m.size() == 0) return 0.0;
    return singular_values(m)(0);
}

double smallest_singular_value(const Matrix& m) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    RealVector s = singular_values(m);
    return s(s.size() - 1);
}

void normalize_column_phases(Matrix& columns) {
    for (Index j = 0; j < columns.cols(); ++j) {
        const double scale = columns.col(j).norm();
        if (scale == 0.0) continue;
        for (Index i = 0; i < columns.rows(); ++i) {
            const Complex x = columns(i, j);
            if (std::abs(x) > 1e-8 * scale) {
                columns.col(j) *= std::conj(x) / std::abs(x);
                columns(i, j) = Complex(columns(i, j).real(), 0.0);
                break;
            }
        }
    }
}

namespace {

Matrix hermitian_part(const Matrix& p) { return (p + p.adjoint()) / 2.0; }

Matrix outer(const Matrix& basis) {
    if (basis.cols() == 0) return Matrix::Zero(basis.rows(), basis.rows());
    return hermitian_part(basis * basis.adjoint());
}

}  // namespace

// ---------------------------------------------------------------------------
// OrthoProjection

OrthoProjection OrthoProjection::zero(Index n) {
    return from_bases(Matrix(n, 0), Matrix::Identity(n, n));
}

OrthoProjection OrthoProjection::identity(Index n) {
    return from_bases(Matrix::Identity(n, n), Matrix(n, 0));
}

OrthoProjection OrthoProjection::from_bases(Matrix range_basis, Matrix complement_basis, double tol) {
    if (range_basis.rows() != complement_basis.rows() ||
        range_basis.cols() + complement_basis.cols() != range_basis.rows()) {
        throw InputError("OrthoProjection: bases do not partition the space");
    }
    normalize_column_phases(range_basis);
    normalize_column_phases(complement_basis);
    OrthoProjection p;
    p.matrix_ = outer(range_basis);
    p.basis_ = std::move(range_basis);
    p.complement_ = std::move(complement_basis);
    p.tol_ = tol;
    return p;
}

OrthoProjection OrthoProjection::from_basis(const Matrix& range_basis, double tol) {
    const Index n = range_basis.rows();
    const Index r = range_basis.cols();
    if (r == 0) return zero(n);
    Eigen::HouseholderQR<Matrix> qr(range_basis);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    return from_bases(range_basis, q.rightCols(n - r), tol);
}

OrthoProjection OrthoProjection::from_matrix(const Matrix& p, double tol) {
    require_square(p, "OrthoProjection");
    require_finite(p, "OrthoProjection");
    const double idem = operator_norm(p * p - p);
    const double herm = operator_norm(p - p.adjoint());
    if (idem > tol || herm > tol) {
        throw InputError("OrthoProjection: matrix is not a Hermitian idempotent (residuals " +
                         std::to_string(idem) + ", " + std::to_string(herm) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(p));
    const RealVector& lambda = eig.eigenvalues();
    const Index n = p.rows();
    Index r = 0;
    for (Index i = 0; i < n; ++i) r += lambda(i) > 0.5 ? 1 : 0;
    const double trace = p.trace().real();
    if (std::abs(trace - static_cast<double>(r)) > static_cast<double>(n) * tol) {
        throw InputError("OrthoProjection: trace does not match rank");
    }
    // eigenvalues ascending: the last r span the range
    return from_bases(eig.eigenvectors().rightCols(r), eig.eigenvectors().leftCols(n - r), tol);
}

OrthoProjection OrthoProjection::complement() const {
    return from_bases(complement_, basis_, tol_);
}

double OrthoProjection::idempotent_residual() const {
    return operator_norm(matrix_ * matrix_ - matrix_);
}

double OrthoProjection::selfadjoint_residual() const {
    return operator_norm(matrix_ - matrix_.adjoint());
}

// ---------------------------------------------------------------------------
// Idempotent

Idempotent::Idempotent(Matrix p, double tol) : matrix_(std::move(p)), tol_(tol) {
    require_square(matrix_, "Idempotent");
    require_finite(matrix_, "Idempotent");
    const double scale = std::max(1.0, operator_norm(matrix_));
    if (residual() > tol_ * scale * scale) {
        throw InputError("Idempotent: ||P^2 - P|| exceeds tolerance");
    }
}

double Idempotent::residual() const { return operator_norm(matrix_ * matrix_ - matrix_); }

// ---------------------------------------------------------------------------
// Singular subspaces

SingularSplit singular_split(const Matrix& m, std::optional<double> tol) {
    if (m.size() == 0) throw InputError("singular_split: empty matrix");
    require_finite(m, "singular_split");
    const Index k = std::min(m.rows(), m.cols());
    detail::SvdResult svd = detail::lapack_svd(m, detail::SvdVectors::Full);
    SingularSplit out;
    out.sigma = std::move(svd.sigma);
    out.u = std::move(svd.u);
    out.v = std::move(svd.v);
    const double cutoff = tol.value_or(default_rank_tol(std::max(m.rows(), m.cols()))) * out.sigma(0);
    Index r = 0;
    if (out.sigma(0) > 0.0) {
        while (r < k && out.sigma(r) > cutoff) ++r;
    }
    out.rank = r;
    return out;
}

OrthoProjection kernel_projection(const Matrix& m, std::optional<double> tol) {
    if (m.rows() == 0) return OrthoProjection::identity(m.cols());
    SingularSplit s = singular_split(m, tol);
    const Index n = m.cols();
    return OrthoProjection::from_bases(s.v.rightCols(n - s.rank), s.v.leftCols(s.rank));
}

OrthoProjection range_projection(const Matrix& m, std::optional<double> tol) {
    if (m.cols() == 0) return OrthoProjection::zero(m.rows());
    SingularSplit s = singular_split(m, tol);
    const Index n = m.rows();
    return OrthoProjection::from_bases(s.u.leftCols(s.rank), s.u.rightCols(n - s.rank));
}

namespace {

void require_same_dim(const OrthoProjection& e, const OrthoProjection& f, std::string_view what) {
    if (e.dim() != f.dim()) throw InputError(std::string(what) + ": dimension mismatch");
}

Index count_above(const RealVector& sigma, double tol) {
    const double cutoff = tol * std::max(1.0, sigma.size() ? sigma(0) : 0.0);
    Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff) ++r;
    return r;
}

}  // namespace

OrthoProjection meet(const OrthoProjection& e, const OrthoProjection& f, double tol) {
    require_same_dim(e, f, "meet");
    const Index n = e.dim();
    if (n == 0) return e;
    Matrix stacked(2 * n, n);
    stacked.topRows(n) = Matrix::Identity(n, n) - e.matrix();
    stacked.bottomRows(n) = Matrix::Identity(n, n) - f.matrix();
    const detail::SvdResult svd = detail::lapack_svd(stacked, detail::SvdVectors::Thin);
    const Index r = count_above(svd.sigma, tol);
    const Matrix& v = svd.v;
    return OrthoProjection::from_bases(v.rightCols(n - r), v.leftCols(r), tol);
}

OrthoProjection join(const OrthoProjection& e, const OrthoProjection& f, double tol) {
    require_same_dim(e, f, "join");
    const Index n = e.dim();
    if (n == 0) return e;
    Matrix wide(n, 2 * n);
    wide.leftCols(n) = e.matrix();
    wide.rightCols(n) = f.matrix();
    const detail::SvdResult svd = detail::lapack_svd(wide, detail::SvdVectors::Thin);
    const Index r = count_above(svd.sigma, tol);
    const Matrix& u = svd.u;
    return OrthoProjection::from_bases(u.leftCols(r), u.rightCols(n - r), tol);
}

OrthoProjection spectral_projection_abs(const Matrix& t, double c, double tol) {
    if (!(c >= 0.0)) throw InputError("spectral_projection_abs: cut must be non-negative");
    SingularSplit s = singular_split(t);
    const Index n = t.rows();
    Index above = 0;
    for (Index i = 0; i < n; ++i) {
        if (std::abs(s.sigma(i) - c) <= tol) {
            throw AmbiguousCut("spectral_projection_abs: singular value " +
                                   std::to_string(s.sigma(i)) + " within tolerance of cut " +
                                   std::to_string(c),
                               c);
        }
        if (s.sigma(i) > c) ++above;
    }
    return OrthoProjection::from_bases(s.v.rightCols(n - above), s.v.leftCols(above), tol);
}

ProjectionOrder compare_projections(const OrthoProjection& e, const OrthoProjection& f) {
    require_same_dim(e, f, "compare_projections");
    if (e.rank() < f.rank()) return ProjectionOrder::FirstBelow;
    if (e.rank() > f.rank()) return ProjectionOrder::SecondBelow;
    return ProjectionOrder::Equivalent;
}

double bounded_below_constant(const Matrix& t, const OrthoProjection& e) {
    require_finite(t, "bounded_below_constant");
    if (t.rows() != e.dim() || t.cols() != e.dim()) {
        throw InputError("bounded_below_constant: dimension mismatch");
    }
    if (e.rank() == 0) return std::numeric_limits<double>::infinity();
    return smallest_singular_value(t * e.basis());
}

RangeCoupling range_coupling(const OrthoProjection& r1, const OrthoProjection& r2) {
    require_same_dim(r1, r2, "range_coupling");
    if (r1.rank() == 0 || r2.rank() == 0) return {0.0, 1.0};
    const double c = std::min(1.0, operator_norm(r1.basis().adjoint() * r2.basis()));
    // sine of the smallest principal angle
    const Matrix away = r2.basis() - r1.basis() * (r1.basis().adjoint() * r2.basis());
    const double s = std::min(1.0, smallest_singular_value(away));
    return {c, s * s / (1.0 + c)};
}

}  // namespace cleandec
