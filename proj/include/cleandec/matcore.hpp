#pragma once

#include <limits>
#include <optional>

#include "cleandec/types.hpp"

namespace cleandec {

/// Default relative cutoff for numerical rank: n * 2^-44.
double default_rank_tol(Index n);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Smallest of the min(rows, cols) singular values; +inf for an empty matrix.
double smallest_singular_value(const Matrix& m);

RealVector singular_values(const Matrix& m);

/// Multiplies each column by a unit scalar so that its first entry of
/// non-negligible modulus is real and positive.
void normalize_column_phases(Matrix& columns);

/// Orthogonal projection stored together with orthonormal bases of its range
/// and of the orthogonal complement of its range.
class OrthoProjection {
public:
    OrthoProjection() = default;

    static OrthoProjection zero(Index n);
    static OrthoProjection identity(Index n);

    /// Columns of both arguments must together form a unitary matrix.
    static OrthoProjection from_bases(Matrix range_basis, Matrix complement_basis,
                                      double tol = kConstructionTol);

    /// Completes an orthonormal `range_basis` to the full space.
    static OrthoProjection from_basis(const Matrix& range_basis, double tol = kConstructionTol);

    /// Validates a Hermitian idempotent matrix within `tol` and cleans it up
    /// by rounding its eigenvalues to 0 or 1.
    static OrthoProjection from_matrix(const Matrix& p, double tol = 1e-8);

    Index dim() const { return matrix_.rows(); }
    Index rank() const { return basis_.cols(); }
    double tolerance() const { return tol_; }

    const Matrix& matrix() const { return matrix_; }
    const Matrix& basis() const { return basis_; }
    const Matrix& complement_basis() const { return complement_; }

    /// I - P.
    OrthoProjection complement() const;

    double idempotent_residual() const;
    double selfadjoint_residual() const;

private:
    Matrix matrix_;
    Matrix basis_;
    Matrix complement_;
    double tol_ = kConstructionTol;
};

/// Idempotent matrix, not necessarily Hermitian.
class Idempotent {
public:
    Idempotent() = default;

    /// Throws InputError unless ||P^2 - P|| <= tol * max(1, ||P||)^2.
    explicit Idempotent(Matrix p, double tol = 1e-8);

    const Matrix& matrix() const { return matrix_; }
    double tolerance() const { return tol_; }
    double residual() const;

private:
    Matrix matrix_;
    double tol_ = 1e-8;
};

/// Left and right singular subspaces of a square matrix split at a numerical rank.
struct SingularSplit {
    RealVector sigma;  // descending
    Matrix u;
    Matrix v;
    Index rank = 0;
};

SingularSplit singular_split(const Matrix& m, std::optional<double> tol = std::nullopt);

/// Projection onto the kernel: right-singular vectors with sigma <= tol * sigma_max.
OrthoProjection kernel_projection(const Matrix& m, std::optional<double> tol = std::nullopt);

/// Projection onto the range: left-singular vectors with sigma > tol * sigma_max.
OrthoProjection range_projection(const Matrix& m, std::optional<double> tol = std::nullopt);

/// E ∧ F, the kernel of the stacked pair [(I-E); (I-F)].
OrthoProjection meet(const OrthoProjection& e, const OrthoProjection& f,
                     double tol = kConstructionTol);

/// E ∨ F, the range of the concatenation [E F].
OrthoProjection join(const OrthoProjection& e, const OrthoProjection& f,
                     double tol = kConstructionTol);

/// Spectral projection of |T| for [0, c]. Throws AmbiguousCut when a singular
/// value lies within `tol` of `c`.
OrthoProjection spectral_projection_abs(const Matrix& t, double c, double tol = kConstructionTol);

enum class ProjectionOrder { FirstBelow, SecondBelow, Equivalent };

/// Murray-von Neumann comparison in M_n: rank comparison.
ProjectionOrder compare_projections(const OrthoProjection& e, const OrthoProjection& f);

/// min ||T xi|| over unit xi in range(E); +inf when E = 0.
double bounded_below_constant(const Matrix& t, const OrthoProjection& e);

/// Overlap between the ranges of two projections.
struct RangeCoupling {
    double coupling;       // ||R1 R2||
    double one_minus;      // 1 - ||R1 R2||, computed from the sine of the smallest angle
};

RangeCoupling range_coupling(const OrthoProjection& r1, const OrthoProjection& r2);

}  // namespace cleandec
