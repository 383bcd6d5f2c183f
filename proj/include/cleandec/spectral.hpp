#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cleandec/certificate.hpp"
#include "cleandec/matcore.hpp"

namespace cleandec {

/// A = Q U Q^*, Q unitary, U upper triangular.
struct SchurForm {
    Matrix q;
    Matrix u;
    double residual = 0.0;  // ||A - Q U Q^*||

    Vector eigenvalues() const { return u.diagonal(); }
};

/// Complex Schur decomposition. Throws NumericalFailure if the QR iteration
/// does not converge.
SchurForm schur(const Matrix& a);

/// Moves the eigenvalues accepted by `select` to the leading diagonal positions
/// (preserving relative order) with adjacent Givens swaps. Returns their count.
Index reorder_schur(SchurForm& form, const std::function<bool(Complex)>& select);

struct NilpotentBound {
    double bound;            // ||A^{-1}|| * sum_{k<n} ||A^{-1}B||^k
    double measured_inverse;  // ||(A - B)^{-1}||, computed directly
};

/// Inverse-norm bound for A - B when (A^{-1}B)^n = 0. Throws PreconditionError
/// when A is singular or A^{-1}B is not nilpotent, NumericalFailure if the
/// direct measurement exceeds the bound.
NilpotentBound nilpotent_perturbation_bound(const Matrix& a, const Matrix& b);

/// Radius in [1/4, 3/4] maximizing the distance to the eigenvalue moduli.
/// Requires some |lambda| < 1/4 and some |lambda| > 3/4; the result keeps every
/// modulus at distance >= 1/(4n).
double choose_separating_radius(std::span<const Complex> eigenvalues, Index n);

enum class RieszMethod { SchurSubspace, Quadrature };

struct RieszOptions {
    RieszMethod method = RieszMethod::SchurSubspace;
    /// Initial trapezoid nodes; 0 selects max(64, 16n).
    Index nodes = 0;
    /// Sample max ||(zI - A)^{-1}|| over the initial contour nodes.
    bool sample_resolvent = true;
};

struct RieszResult {
    double radius = 0.0;
    Idempotent projector;
    Index inside_count = 0;
    std::optional<double> resolvent_bound;
    RieszMethod method = RieszMethod::SchurSubspace;
    Index nodes_used = 0;  // quadrature only
};

/// Spectral idempotent for the eigenvalues inside |z| < r. Requires every
/// eigenvalue to stay at least 1/(8n) away from the circle.
RieszResult riesz_projection(const Matrix& a, double r, const RieszOptions& options = {});

/// Constants C1 and C2 of the separated-spectrum estimate, kept in log-space.
struct PaperConstants {
    Index n = 1;
    double norm = 0.0;
    double log_c1 = 0.0;
    double log_c2 = 0.0;

    double c1() const { return std::exp(log_c1); }
    double c2() const { return std::exp(log_c2); }
};

PaperConstants paper_constants(double norm, Index n);

/// log(4n * sum_{k<n} (8n norm)^k), the resolvent bound on a separating circle.
double log_resolvent_bound(double norm, Index n);

/// log(4 * sum_{k<n} (8 norm)^k), the inverse bound when the spectrum stays on
/// one side of the annulus 1/4 <= |z| <= 3/4.
double log_one_sided_bound(double norm, Index n);

/// log(sum_{k<n} x^k) for x >= 0, without overflow.
double log_geometric_sum(double log_x, Index n);

enum class StrongBranch { Zero, Identity, Riesz };

/// A = (A - P) + P with P idempotent, PA = AP and A - P invertible.
CleanCertificate strongly_clean_decompose(const Matrix& a);

/// A finitely valued field of n x n matrices.
struct MatrixField {
    Index n = 0;
    std::vector<Matrix> points;
};

struct FieldCell {
    std::vector<std::size_t> members;  // indices into the field, anchor first
    StrongBranch branch = StrongBranch::Zero;
    std::optional<double> radius;
};

struct FieldCertificate {
    std::vector<FieldCell> cells;
    std::vector<CleanCertificate> certificates;  // one per field point
    bool cellwise_uniform = true;
    double log_c2 = 0.0;
    double log_cell_diameter = 0.0;  // log(1 / (2 C2))
};

FieldCertificate strongly_clean_field(const MatrixField& field);

}  // namespace cleandec
