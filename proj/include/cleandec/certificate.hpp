#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "cleandec/types.hpp"

namespace cleandec {

enum class CleanMode { Clean, Strong, Star, AlmostStar, ScalarPlusSmall };

std::string_view to_string(CleanMode mode);
CleanMode parse_mode(std::string_view name);

/// Record of a decomposition T = (T - P) + P.
///
/// `p` is kept as a plain matrix so that a tampered or foreign certificate can
/// still be represented and rejected by verify_certificate.
struct CleanCertificate {
    CleanMode mode = CleanMode::Clean;
    Matrix p;
    /// Measured ||(T - P)^{-1}||; for almost-star only injectivity is claimed.
    double inverse_norm = 0.0;
    /// Natural log of the claimed bound on inverse_norm, when one is claimed.
    std::optional<double> log_claimed_bound;
    double residual_idempotent = 0.0;
    std::optional<double> residual_commute;
    std::optional<double> residual_selfadjoint;
    /// Which construction produced P ("identity", "zero", "riesz", "halmos", ...).
    std::string branch;
    /// Spectral cut or contour radius used, if any.
    std::optional<double> parameter;

    Index n() const { return p.rows(); }

    std::optional<double> claimed_bound() const {
        if (!log_claimed_bound) return std::nullopt;
        return std::exp(*log_claimed_bound);
    }
};

}  // namespace cleandec
