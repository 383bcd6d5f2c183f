#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "cleandec/clean.hpp"
#include "cleandec/corpus.hpp"
#include "cleandec/errors.hpp"
#include "cleandec/io.hpp"
#include "cleandec/report.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cleandec;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index i = 0; i < a.size(); ++i) {
        const Complex x = a.data()[i], y = b.data()[i];
        if (std::memcmp(&x, &y, sizeof(Complex)) != 0) return false;
    }
    return true;
}

std::size_t parse_error_line(std::string_view text) {
    try {
        parse_matrix_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("plain-text parsing") {
    CHECK(parse_matrix_text("1 1\n0 0\n") == Matrix::Zero(1, 1));
    CHECK(parse_matrix_text("2 2\n1 0\n0 0\n0 0\n1 0\n") == Matrix::Identity(2, 2));
    const Matrix m = parse_matrix_text("1 2\n-1.5e-3 2\n2.5e-1 -0\n");
    CHECK(m(0, 0) == Complex(-1.5e-3, 2.0));
    CHECK(m(0, 1).real() == 0.25);

    CHECK(parse_error_line("") == 1);
    CHECK(parse_error_line("2 x\n") == 1);
    CHECK(parse_error_line("1 1\nabc 0\n") == 2);
    CHECK(parse_error_line("1 2\n1 0\n") == 3);
    CHECK(parse_error_line("1 1\n1 0 3\n") == 2);
    CHECK(parse_error_line("1 1\n1 0\n2 0\n") == 3);
    CHECK(parse_error_line("0 1\n") == 1);
    CHECK(parse_error_line("1 1\nnan 0\n") == 2);
}

TEST_CASE("plain-text round trip is bit exact") {
    gen::Source src(61);
    for (int trial = 0; trial < 100; ++trial) {
        const Index r = src.integer(1, 9), c = src.integer(1, 9);
        Matrix m = src.gaussian(r, c);
        if (trial % 4 == 0) m(0, 0) = Complex(std::numeric_limits<double>::denorm_min(), -0.0);
        if (trial % 4 == 1) m(0, 0) = Complex(1e300, std::nextafter(1.0, 2.0));
        const std::string text = emit_matrix_text(m);
        const Matrix back = parse_matrix_text(text);
        CHECK(bit_equal(m, back));
        CHECK(emit_matrix_text(back) == text);
    }
}

TEST_CASE("emit(parse(f)) reproduces generated files byte for byte") {
    CorpusConfig cfg;
    cfg.seed = 3;
    cfg.count = 100;
    cfg.max_n = 8;
    for (const CorpusMember& m : generate_corpus(cfg)) {
        const std::string file = emit_matrix_text(m.matrix);
        CHECK(emit_matrix_text(parse_matrix_text(file)) == file);
    }
}

TEST_CASE("structured format") {
    gen::Source src(62);
    const Matrix m = src.gaussian(3, 2);
    const std::string doc = emit_matrix_json(m);
    CHECK(bit_equal(parse_matrix_json(doc), m));
    CHECK(parse_matrix_json(R"({"rows":1,"cols":1,"data":[[2,-1]]})")(0, 0) == Complex(2, -1));
    CHECK_THROWS_AS(parse_matrix_json(R"({"rows":2,"cols":1,"data":[[2,-1]]})"), InputError);
    CHECK_THROWS_AS(parse_matrix_json("{not json"), InputError);
    CHECK(format_for_path("a/b.json") == MatrixFormat::Structured);
    CHECK(format_for_path("a/b.txt") == MatrixFormat::PlainText);
}

TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "cleandec_test_io";
    std::filesystem::create_directories(dir);
    gen::Source src(63);
    const Matrix m = src.gaussian(4, 4);
    write_matrix(dir / "m.txt", m);
    write_matrix(dir / "m.json", m);
    CHECK(bit_equal(read_matrix(dir / "m.txt"), m));
    CHECK(bit_equal(read_matrix(dir / "m.json"), m));
    CHECK_THROWS_AS(read_matrix(dir / "missing.txt"), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("certificate serialization round trip") {
    gen::Source src(64);
    const Matrix t = src.gaussian(5, 5);
    for (CleanMode mode : {CleanMode::Clean, CleanMode::Strong, CleanMode::Star, CleanMode::AlmostStar}) {
        const CleanCertificate c = decompose(t, mode);
        const CleanCertificate back = certificate_from_json(certificate_to_json(c));
        CHECK(back.mode == c.mode);
        CHECK(bit_equal(back.p, c.p));
        CHECK(back.inverse_norm == c.inverse_norm);
        CHECK(back.log_claimed_bound == c.log_claimed_bound);
        CHECK(back.residual_commute == c.residual_commute);
        CHECK(back.residual_selfadjoint == c.residual_selfadjoint);
        CHECK(back.branch == c.branch);
        CHECK(back.parameter == c.parameter);
        CHECK(verify_certificate(t, back).passed());
    }
    CHECK_THROWS_AS(certificate_from_json(R"({"mode":"clean"})"), InputError);
}

TEST_CASE("corpus determinism and family contracts") {
    CorpusConfig cfg;
    cfg.seed = 0;
    cfg.count = 60;
    cfg.max_n = 10;
    const auto a = generate_corpus(cfg);
    const auto b = generate_corpus(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].family == b[i].family);
        CHECK(emit_matrix_text(a[i].matrix) == emit_matrix_text(b[i].matrix));
    }
    cfg.seed = 1;
    CHECK(emit_matrix_text(generate_corpus(cfg)[0].matrix) != emit_matrix_text(a[0].matrix));

    // members do not depend on how many come after them
    cfg.seed = 0;
    cfg.count = 5;
    const auto prefix = generate_corpus(cfg);
    for (std::size_t i = 0; i < prefix.size(); ++i) CHECK(bit_equal(prefix[i].matrix, a[i].matrix));

    cfg.count = 200;
    cfg.families = {CorpusFamily::ClusterHalf};
    for (const CorpusMember& m : generate_corpus(cfg)) {
        const RealVector s = singular_values(m.matrix);
        CHECK(((s.array() - 0.5).abs() <= 1e-3).any());
    }

    // nilpotent jordan members have every eigenvalue at 0
    Rng rng(5);
    int nilpotent = 0;
    for (int i = 0; i < 200; ++i) {
        const Matrix j = generate_member(CorpusFamily::Jordan, 4, rng);
        if (j.diagonal().cwiseAbs().maxCoeff() == 0.0) {
            ++nilpotent;
            CHECK(oracle::norm(j * j * j * j) == 0.0);
        }
    }
    CHECK(nilpotent > 20);

    CHECK_THROWS_AS(parse_family("bogus"), InputError);
    cfg.max_n = 513;
    CHECK_THROWS_AS(generate_corpus(cfg), InputError);
}

TEST_CASE("rng matches the documented algorithm") {
    // mt19937_64 with the default tempering; 53-bit uniforms from the top bits
    std::mt19937_64 ref(42);
    Rng rng(42);
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t x = ref();
        CHECK(rng.uniform() == static_cast<double>(x >> 11) * 0x1.0p-53);
    }
    CHECK(member_seed(0, 0) != member_seed(0, 1));
    CHECK(member_seed(1, 0) != member_seed(0, 0));
    Rng r2(9);
    for (int i = 0; i < 1000; ++i) {
        const Index k = r2.uniform_int(3, 7);
        CHECK(k >= 3);
        CHECK(k <= 7);
    }
}

TEST_CASE("report") {
    const std::string empty = emit_report({}, ReportFormat::Csv);
    CHECK(lines_of(empty).size() == 1);
    CHECK(lines_of(empty)[0] ==
          "index,mode,n,inverse_norm,claimed_bound,residual_idempotent,residual_commute,residual_selfadjoint,pass");

    const std::vector<CleanCertificate> one{clean_decompose(Matrix::Zero(2, 2))};
    const auto rows = lines_of(emit_report(one, ReportFormat::Csv));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].starts_with("0,clean,2,1,4,"));
    CHECK(rows[1].ends_with(",true"));
    CHECK(rows[2].starts_with("summary,clean,,1,"));

    const auto md = lines_of(emit_report(one, ReportFormat::Markdown));
    REQUIRE(md.size() == 4);
    CHECK(md[0].starts_with("| index | mode |"));
    CHECK(md[1].starts_with("| --- |"));
}

TEST_CASE("report summary matches the rowwise maximum") {
    CorpusConfig cfg;
    cfg.seed = 11;
    cfg.count = 100;
    cfg.max_n = 10;
    std::vector<CleanCertificate> certs;
    for (const CorpusMember& m : generate_corpus(cfg)) {
        certs.push_back(clean_decompose(m.matrix));
        certs.push_back(strongly_clean_decompose(m.matrix));
    }
    std::map<std::string, double> worst;
    std::map<std::string, double> summary;
    for (const std::string& line : lines_of(emit_report(certs, ReportFormat::Csv))) {
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 9);
        if (cells[0] == "index") continue;
        if (cells[0] == "summary") {
            summary[cells[1]] = std::stod(cells[3]);
        } else {
            worst[cells[1]] = std::max(worst[cells[1]], std::stod(cells[3]));
            CHECK(cells[8] == "true");
        }
    }
    CHECK(summary.size() == 2);
    CHECK(summary == worst);
}
