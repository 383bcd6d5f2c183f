#include "cleandec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cleandec/errors.hpp"

namespace cleandec {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

// Splits into lines, accepting a trailing newline but not blank lines in between.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

double parse_real(std::string_view tok, std::size_t line_no) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ParseError("not a number: '" + std::string(tok) + "'", line_no);
    }
    if (!std::isfinite(x)) throw ParseError("non-finite value '" + std::string(tok) + "'", line_no);
    return x;
}

Index parse_dim(std::string_view tok, std::size_t line_no) {
    long long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 1 || v > 4096) {
        throw ParseError("bad dimension '" + std::string(tok) + "'", line_no);
    }
    return static_cast<Index>(v);
}

json matrix_to_json_value(const Matrix& m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json_value(const json& doc) {
    if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") || !doc.contains("data")) {
        throw ParseError("structured matrix needs rows, cols and data", 1);
    }
    if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer()) {
        throw ParseError("rows and cols must be integers", 1);
    }
    const auto rows = doc["rows"].get<long long>();
    const auto cols = doc["cols"].get<long long>();
    if (rows < 1 || cols < 1 || rows > 4096 || cols > 4096) throw ParseError("bad dimensions", 1);
    const json& data = doc["data"];
    if (!data.is_array() || data.size() != static_cast<std::size_t>(rows * cols)) {
        throw ParseError("data must hold rows*cols entries", 1);
    }
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j, ++k) {
            const json& e = data[k];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ParseError("entry " + std::to_string(k) + " is not a [re, im] pair", 1);
            }
            m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    require_finite(m, "structured matrix");
    return m;
}

json parse_json_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), 1);
    }
}

json optional_number(const std::optional<double>& x) {
    if (!x) return nullptr;
    return *x;
}

std::optional<double> read_optional(const json& doc, const char* key) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_number()) throw ParseError(std::string("field '") + key + "' must be a number", 1);
    return doc[key].get<double>();
}

json certificate_value(const CleanCertificate& cert) {
    return {
        {"mode", std::string(to_string(cert.mode))},
        {"n", cert.n()},
        {"branch", cert.branch},
        {"parameter", optional_number(cert.parameter)},
        {"inverse_norm", cert.inverse_norm},
        {"log_claimed_bound", optional_number(cert.log_claimed_bound)},
        {"claimed_bound", optional_number(cert.claimed_bound())},
        {"residual_idempotent", cert.residual_idempotent},
        {"residual_commute", optional_number(cert.residual_commute)},
        {"residual_selfadjoint", optional_number(cert.residual_selfadjoint)},
        {"p", matrix_to_json_value(cert.p)},
    };
}

}  // namespace

Matrix parse_matrix_text(std::string_view text) {
    const std::vector<std::string_view> lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty input", 1);
    const auto header = tokens(lines[0]);
    if (header.size() != 2) throw ParseError("header must be 'rows cols'", 1);
    const Index rows = parse_dim(header[0], 1);
    const Index cols = parse_dim(header[1], 1);
    const std::size_t expected = static_cast<std::size_t>(rows * cols);
    if (lines.size() - 1 < expected) {
        throw ParseError("expected " + std::to_string(expected) + " entries, found " +
                             std::to_string(lines.size() - 1),
                         lines.size() + 1);
    }
    if (lines.size() - 1 > expected) throw ParseError("unexpected extra line", expected + 2);
    Matrix m(rows, cols);
    for (std::size_t k = 0; k < expected; ++k) {
        const std::size_t line_no = k + 2;
        const auto parts = tokens(lines[k + 1]);
        if (parts.size() != 2) throw ParseError("entry line must be 're im'", line_no);
        const auto idx = static_cast<Index>(k);
        m(idx / cols, idx % cols) = Complex(parse_real(parts[0], line_no), parse_real(parts[1], line_no));
    }
    return m;
}

std::string emit_matrix_text(const Matrix& m) {
    std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out += format_double(m(i, j).real());
            out += ' ';
            out += format_double(m(i, j).imag());
            out += '\n';
        }
    }
    return out;
}

Matrix parse_matrix_json(std::string_view text) { return matrix_from_json_value(parse_json_document(text)); }

std::string emit_matrix_json(const Matrix& m) { return matrix_to_json_value(m).dump() + "\n"; }

MatrixFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? MatrixFormat::Structured : MatrixFormat::PlainText;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

Matrix read_matrix(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return format_for_path(path) == MatrixFormat::Structured ? parse_matrix_json(text) : parse_matrix_text(text);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    write_file(path, format_for_path(path) == MatrixFormat::Structured ? emit_matrix_json(m) : emit_matrix_text(m));
}

std::string certificate_to_json(const CleanCertificate& cert) { return certificate_value(cert).dump(2) + "\n"; }

CleanCertificate certificate_from_json(std::string_view text) {
    const json doc = parse_json_document(text);
    if (!doc.is_object() || !doc.contains("mode") || !doc.contains("p") || !doc.contains("inverse_norm")) {
        throw ParseError("certificate needs mode, p and inverse_norm", 1);
    }
    if (!doc["mode"].is_string() || !doc["inverse_norm"].is_number()) {
        throw ParseError("certificate has malformed mode or inverse_norm", 1);
    }
    CleanCertificate cert;
    cert.mode = parse_mode(doc["mode"].get<std::string>());
    cert.p = matrix_from_json_value(doc["p"]);
    cert.inverse_norm = doc["inverse_norm"].get<double>();
    cert.log_claimed_bound = read_optional(doc, "log_claimed_bound");
    cert.residual_idempotent = read_optional(doc, "residual_idempotent").value_or(0.0);
    cert.residual_commute = read_optional(doc, "residual_commute");
    cert.residual_selfadjoint = read_optional(doc, "residual_selfadjoint");
    cert.parameter = read_optional(doc, "parameter");
    if (doc.contains("branch") && doc["branch"].is_string()) cert.branch = doc["branch"].get<std::string>();
    return cert;
}

std::string halmos_to_json(const HalmosForm& form) {
    json h = json::array();
    for (Index i = 0; i < form.h.size(); ++i) h.push_back(form.h(i));
    const json doc = {
        {"n", form.n()},
        {"delta", form.delta},
        {"dims", {{"d1", form.d1}, {"d2", form.d2}, {"d3", form.d3}, {"d4", form.d4}, {"d_extra", form.d_extra}}},
        {"extra_in_e", form.extra_in_e},
        {"h", std::move(h)},
        {"residual_unitary", form.residual_unitary},
        {"residual_e", form.residual_e},
        {"residual_f", form.residual_f},
        {"w", matrix_to_json_value(form.w)},
    };
    return doc.dump(2) + "\n";
}

std::string riesz_to_json(const RieszResult& result) {
    const json doc = {
        {"radius", result.radius},
        {"method", result.method == RieszMethod::Quadrature ? "quadrature" : "schur"},
        {"inside_count", result.inside_count},
        {"nodes_used", result.nodes_used},
        {"resolvent_bound", optional_number(result.resolvent_bound)},
        {"residual_idempotent", result.projector.residual()},
        {"p", matrix_to_json_value(result.projector.matrix())},
    };
    return doc.dump(2) + "\n";
}

std::string field_to_json(const FieldCertificate& field) {
    json cells = json::array();
    for (const FieldCell& cell : field.cells) {
        const char* branch = cell.branch == StrongBranch::Riesz      ? "riesz"
                             : cell.branch == StrongBranch::Identity ? "identity"
                                                                     : "zero";
        cells.push_back({{"members", cell.members}, {"branch", branch}, {"radius", optional_number(cell.radius)}});
    }
    json certs = json::array();
    for (const CleanCertificate& c : field.certificates) certs.push_back(certificate_value(c));
    const json doc = {
        {"cellwise_uniform", field.cellwise_uniform},
        {"log_c2", field.log_c2},
        {"log_cell_diameter", field.log_cell_diameter},
        {"cells", std::move(cells)},
        {"certificates", std::move(certs)},
    };
    return doc.dump(2) + "\n";
}

std::string witness_table_csv(const WitnessTable& table) {
    std::string out = "n,measured,reference,pass\n";
    for (const WitnessRow& r : table.rows) {
        out += std::to_string(r.n) + "," + format_double(r.measured) + "," + format_double(r.reference) + "," +
               (r.pass ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace cleandec
