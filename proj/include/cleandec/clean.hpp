#pragma once

#include <string>
#include <vector>

#include "cleandec/certificate.hpp"
#include "cleandec/halmos.hpp"

namespace cleandec {

/// Partial isometry from range(E) to range(I - E) that sends each paired E∧F⊥
/// vector to its (I-E)∧F partner and each generic e_j to i f_j. Requires
/// d_extra = 0; throws AmbiguousSplit otherwise.
Matrix build_alignment(const HalmosForm& form, const OrthoProjection& e, const OrthoProjection& f);

/// Intermediate objects of clean_decompose, exposed for inspection and tests.
struct CleanTrace {
    double cut = 0.5;
    OrthoProjection e;  // spectral projection of |T| on [0, cut]
    OrthoProjection f;  // I - R(T(I - E))
    std::optional<HalmosForm> form;
    Matrix alignment;
    double te_norm = 0.0;  // ||TE||
    /// ||R((T-P)E) R(T(I-E))||, at most 1/sqrt(2) for the constructed P.
    double coupling = 0.0;
};

struct CleanResult {
    CleanCertificate certificate;
    CleanTrace trace;
};

/// T = (T - P) + P with P idempotent and ||(T - P)^{-1}|| <= 4 (or the widened
/// bound max(4, 2 / min(c, 1 - c)) when the cut at 1/2 had to be moved to c).
CleanResult clean_decompose_traced(const Matrix& t);
CleanCertificate clean_decompose(const Matrix& t);

/// Decomposes zI + T_full where T_full is within 1/8 of A = E A E.
CleanCertificate scalar_plus_small_decompose(Complex z, const Matrix& a, const OrthoProjection& block_e,
                                             const Matrix& t_full);

/// P an orthogonal projection with T - P injective.
CleanCertificate almost_star_clean_decompose(const Matrix& t);

/// P an orthogonal projection with T - P invertible, built from E = I - K(T), F = R(T).
CleanCertificate star_clean_closed_range(const Matrix& t);

/// Dispatches on mode; ScalarPlusSmall is not available through this entry point.
CleanCertificate decompose(const Matrix& t, CleanMode mode);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    /// Inverse norm recomputed by the verifier, when T - P could be formed.
    std::optional<double> inverse_norm;

    bool passed() const;
    const CheckResult* find(std::string_view name) const;
};

/// Recomputes every invariant of the certificate's mode from T and P alone.
VerificationReport verify_certificate(const Matrix& t, const CleanCertificate& cert, double tol = 1e-8);

}  // namespace cleandec
