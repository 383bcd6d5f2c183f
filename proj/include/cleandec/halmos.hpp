#pragma once

#include <optional>

#include "cleandec/matcore.hpp"

namespace cleandec {

/// Simultaneous canonical form of two orthogonal projections E and F.
///
/// The columns of `w` are an orthonormal basis, grouped as
///
///   [ E∧F | E∧F⊥ paired | (I-E)∧F paired | generic e | generic f | (I-E)∧(I-F) | extras ]
///
/// with sizes d1, d2, d2, d3, d3, d4, d_extra. In that basis E is diagonal and
/// F is diagonal except for the 2x2 blocks [[h, sqrt(h(1-h))], [sqrt(h(1-h)), 1-h]]
/// coupling the j-th generic e and f columns. Extras are the unpaired part of
/// E∧F⊥ (when `extra_in_e`) or of (I-E)∧F.
struct HalmosForm {
    Matrix w;
    Index d1 = 0;
    Index d2 = 0;
    Index d3 = 0;
    Index d4 = 0;
    Index d_extra = 0;
    bool extra_in_e = true;
    RealVector h;  // ascending, i.e. principal angles descending
    double delta = kConstructionTol;

    double residual_unitary = 0.0;  // ||W^* W - I||
    double residual_e = 0.0;        // ||W E_can W^* - E||
    double residual_f = 0.0;        // ||W F_can W^* - F||

    Index n() const { return w.rows(); }

    Matrix e_and_f() const { return w.middleCols(0, d1); }
    Matrix paired_e() const { return w.middleCols(d1, d2); }
    Matrix paired_f() const { return w.middleCols(d1 + d2, d2); }
    Matrix generic_e() const { return w.middleCols(d1 + 2 * d2, d3); }
    Matrix generic_f() const { return w.middleCols(d1 + 2 * d2 + d3, d3); }
    Matrix complement_meet() const { return w.middleCols(d1 + 2 * d2 + 2 * d3, d4); }
    Matrix extras() const { return w.rightCols(d_extra); }

    Matrix canonical_e() const;
    Matrix canonical_f() const;
};

/// Throws AmbiguousSplit when an eigenvalue of the compression of F to range(E)
/// lies within delta/2 of delta or 1 - delta, or when the corner dimensions
/// cannot be made consistent.
HalmosForm halmos_form(const OrthoProjection& e, const OrthoProjection& f,
                       double delta = kConstructionTol);

struct DifferenceInvertibility {
    bool invertible_on_join = false;
    /// ||((E - F) restricted to E∨F)^{-1}||; 1 when E∨F = 0.
    std::optional<double> norm_of_inverse;
    double ef_norm = 0.0;
    /// (1 - ||EF||^2)^{-1/2}, evaluated as 1 / sigma_min((I - E) F restricted to F).
    std::optional<double> formula_norm;
    bool identity_ok = false;
};

DifferenceInvertibility difference_invertibility(const OrthoProjection& e, const OrthoProjection& f);

/// P = E + (I-E)TE - A(ETE - E) with A replaced by (I-E)AE. Throws
/// PreconditionError unless ETE - E is invertible on range(E).
Idempotent graph_idempotent(const Matrix& t, const OrthoProjection& e, const Matrix& a);

struct SumInvertibility {
    bool invertible = false;
    double a1 = 0.0;        // bounded-below constant of T on range(E)
    double a2 = 0.0;        // bounded-below constant of T on range(I - E)
    double coupling = 0.0;  // ||R(TE) R(T(I-E))||
    double one_minus_coupling = 1.0;
    bool sandwich_ok = false;
    std::optional<double> inverse_norm;
};

SumInvertibility sum_invertibility_check(const Matrix& t, const OrthoProjection& e, double tol = 1e-8);

struct ConjugateDuality {
    OrthoProjection f;
    double t_star_f_norm = 0.0;  // ||T^* F||
    double lower_constant = 0.0;  // bounded-below constant of T^* on range(I - F)
    bool dual_ok = false;
};

/// Given ||TE|| <= a and T bounded below by c on ker(E), checks the dual pair
/// of bounds for T^* with F = I - R(T(I - E)). Throws PreconditionError when
/// the hypotheses fail by more than the relative tolerance.
ConjugateDuality conjugate_duality_check(const Matrix& t, const Idempotent& e, double a, double c,
                                         double tol = 1e-8);

}  // namespace cleandec
