#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cleandec/certificate.hpp"
#include "cleandec/halmos.hpp"
#include "cleandec/spectral.hpp"
#include "cleandec/witness.hpp"

namespace cleandec {

enum class MatrixFormat { PlainText, Structured };

/// Plain text: "rows cols" on the first line, then rows*cols lines "re im" in
/// row-major order. Throws ParseError carrying the offending line number.
Matrix parse_matrix_text(std::string_view text);

/// Shortest round-trip decimal form of every entry; parse_matrix_text inverts it exactly.
std::string emit_matrix_text(const Matrix& m);

/// Structured: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
Matrix parse_matrix_json(std::string_view text);
std::string emit_matrix_json(const Matrix& m);

/// ".json" files are structured, anything else is plain text.
MatrixFormat format_for_path(const std::filesystem::path& path);

Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string certificate_to_json(const CleanCertificate& cert);
CleanCertificate certificate_from_json(std::string_view text);

std::string halmos_to_json(const HalmosForm& form);
std::string riesz_to_json(const RieszResult& result);
std::string field_to_json(const FieldCertificate& field);

/// "n,measured,reference,pass" with one row per n.
std::string witness_table_csv(const WitnessTable& table);

/// Formats a double with the shortest representation that parses back exactly.
std::string format_double(double x);

}  // namespace cleandec
