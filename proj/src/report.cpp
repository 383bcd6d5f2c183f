#include "cleandec/report.hpp"

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "cleandec/io.hpp"
#include "cleandec/matcore.hpp"

namespace cleandec {

bool certificate_passes(const CleanCertificate& cert, double tol) {
    if (cert.p.size() == 0 || !cert.p.allFinite()) return false;
    if (!std::isfinite(cert.inverse_norm) || !(cert.inverse_norm > 0.0)) return false;
    if (cert.log_claimed_bound &&
        std::log(cert.inverse_norm) > *cert.log_claimed_bound + std::log1p(kCertificationSlack)) {
        return false;
    }
    const double scale = std::max(1.0, operator_norm(cert.p));
    if (!(cert.residual_idempotent <= tol * scale * scale)) return false;
    if (cert.residual_selfadjoint && !(*cert.residual_selfadjoint <= tol)) return false;
    return true;
}

namespace {

constexpr std::array<const char*, 9> kColumns{"index",
                                              "mode",
                                              "n",
                                              "inverse_norm",
                                              "claimed_bound",
                                              "residual_idempotent",
                                              "residual_commute",
                                              "residual_selfadjoint",
                                              "pass"};

std::string optional_cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::string join_row(const std::vector<std::string>& cells, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Markdown) out += "| ";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out += format == ReportFormat::Markdown ? " | " : ",";
        out += cells[i];
    }
    if (format == ReportFormat::Markdown) out += " |";
    out += "\n";
    return out;
}

}  // namespace

std::string emit_report(std::span<const CleanCertificate> certs, ReportFormat format, double tol) {
    std::vector<std::string> header(kColumns.begin(), kColumns.end());
    std::string out = join_row(header, format);
    if (format == ReportFormat::Markdown) {
        out += join_row(std::vector<std::string>(header.size(), "---"), format);
    }

    std::map<int, double> max_by_mode;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const CleanCertificate& c = certs[i];
        out += join_row({std::to_string(i), std::string(to_string(c.mode)), std::to_string(c.n()),
                         format_double(c.inverse_norm), optional_cell(c.claimed_bound()),
                         format_double(c.residual_idempotent), optional_cell(c.residual_commute),
                         optional_cell(c.residual_selfadjoint), certificate_passes(c, tol) ? "true" : "false"},
                        format);
        auto [it, inserted] = max_by_mode.try_emplace(static_cast<int>(c.mode), c.inverse_norm);
        if (!inserted) it->second = std::max(it->second, c.inverse_norm);
    }
    for (const auto& [mode, worst] : max_by_mode) {
        out += join_row({"summary", std::string(to_string(static_cast<CleanMode>(mode))), "", format_double(worst),
                         "", "", "", "", ""},
                        format);
    }
    return out;
}

}  // namespace cleandec
