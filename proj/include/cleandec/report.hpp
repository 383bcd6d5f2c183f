#pragma once

#include <span>
#include <string>

#include "cleandec/certificate.hpp"

namespace cleandec {

enum class ReportFormat { Csv, Markdown };

/// Checks a certificate against its own recorded values: finite inverse norm,
/// claimed bound respected, idempotency and self-adjointness residuals within
/// tol. The commutation residual is reported but not judged here, since its
/// scale depends on ||T||.
bool certificate_passes(const CleanCertificate& cert, double tol = 1e-8);

/// One row per certificate followed by one summary row per mode present,
/// carrying the maximum inverse_norm of that mode.
std::string emit_report(std::span<const CleanCertificate> certs, ReportFormat format, double tol = 1e-8);

}  // namespace cleandec
