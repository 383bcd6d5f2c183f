#include "cleandec/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cleandec/clean.hpp"
#include "cleandec/corpus.hpp"
#include "cleandec/errors.hpp"
#include "cleandec/io.hpp"
#include "cleandec/report.hpp"
#include "cleandec/spectral.hpp"
#include "cleandec/witness.hpp"

namespace cleandec {

namespace fs = std::filesystem;

double default_tolerance() {
    const char* env = std::getenv("CLEANDEC_TOL");
    if (env == nullptr || *env == '\0') return 1e-8;
    double tol = 0.0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), tol);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !(tol > 0.0) || !std::isfinite(tol)) {
        throw InputError("CLEANDEC_TOL must be a positive number");
    }
    return tol;
}

namespace {

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty()) {
        out << contents;
    } else {
        write_file(path, contents);
    }
}

std::vector<CorpusFamily> parse_families(const std::string& list) {
    if (list.empty() || list == "all") return all_families();
    std::vector<CorpusFamily> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_family(item));
    return out;
}

std::vector<fs::path> matrix_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("not a directory: '" + dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension();
        if (ext == ".txt" || ext == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

void print_report(const VerificationReport& report, std::ostream& out) {
    for (const CheckResult& c : report.checks) {
        out << c.name << " " << format_double(c.value) << " " << format_double(c.threshold) << " "
            << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    out << "verification: " << (report.passed() ? "pass" : "fail") << "\n";
}

struct Options {
    // decompose / verify / riesz / halmos
    std::string mode = "clean";
    std::string in;
    std::string out;
    std::string cert;
    std::string e;
    std::string f;
    std::string radius = "auto";
    std::string method = "schur";
    double tol = 1e-8;
    double delta = kConstructionTol;
    // witness
    Index max_n = 64;
    double grid_step = 1e-2;
    // corpus / report / field
    std::string in_dir;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t count = 100;
    Index min_n = 1;
    Index corpus_max_n = 16;
    std::string families = "all";
    std::string format;
};

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
    const Matrix t = read_matrix(o.in);
    const CleanCertificate cert = decompose(t, parse_mode(o.mode));
    emit(o.out, certificate_to_json(cert), out);
    const VerificationReport report = verify_certificate(t, cert, o.tol);
    if (!report.passed()) {
        print_report(report, err);
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Matrix t = read_matrix(o.in);
    const CleanCertificate cert = certificate_from_json(read_file(o.cert));
    const VerificationReport report = verify_certificate(t, cert, o.tol);
    print_report(report, out);
    return report.passed() ? kExitOk : kExitVerificationFailed;
}

int cmd_halmos(const Options& o, std::ostream& out) {
    const OrthoProjection e = OrthoProjection::from_matrix(read_matrix(o.e), o.tol);
    const OrthoProjection f = OrthoProjection::from_matrix(read_matrix(o.f), o.tol);
    const HalmosForm form = halmos_form(e, f, o.delta);
    emit(o.out, halmos_to_json(form), out);
    return kExitOk;
}

int cmd_riesz(const Options& o, std::ostream& out) {
    const Matrix a = read_matrix(o.in);
    require_square(a, "riesz");
    double r = 0.0;
    if (o.radius == "auto") {
        const Vector eigs = schur(a).eigenvalues();
        const std::vector<Complex> ev(eigs.data(), eigs.data() + eigs.size());
        r = choose_separating_radius(ev, a.rows());
    } else {
        const auto res = std::from_chars(o.radius.data(), o.radius.data() + o.radius.size(), r);
        if (res.ec != std::errc() || res.ptr != o.radius.data() + o.radius.size() || !(r > 0.0)) {
            throw InputError("--radius must be 'auto' or a positive number");
        }
    }
    RieszOptions opts;
    opts.method = o.method == "quadrature" ? RieszMethod::Quadrature : RieszMethod::SchurSubspace;
    emit(o.out, riesz_to_json(riesz_projection(a, r, opts)), out);
    return kExitOk;
}

int cmd_shift_table(const Options& o, std::ostream& out) {
    const WitnessTable table = shift_inverse_lowerbound_table(o.max_n);
    emit(o.out, witness_table_csv(table), out);
    return table.all_pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_star_counterexample(const Options& o, std::ostream& out) {
    const StarCounterexampleReport r = strong_star_clean_counterexample(o.grid_step);
    std::ostringstream s;
    s << "T = [[1, 1], [0, 0]]\n";
    s << "commuting projections (closed form): " << r.symbolic_projections.size() << "\n";
    for (const Matrix& p : r.symbolic_projections) {
        s << "  rank " << std::llround(p.trace().real()) << "\n";
    }
    s << "grid points: " << r.grid_points << ", step " << format_double(r.grid_step) << "\n";
    s << "min ||TP - PT|| over rank-one grid: " << format_double(r.grid_min_commutator) << " (threshold "
      << format_double(r.grid_threshold) << ")\n";
    s << "|det(T)| = " << format_double(r.det_t) << ", |det(T - I)| = " << format_double(r.det_t_minus_identity)
      << "\n";
    s << "methods agree: " << (r.methods_agree ? "yes" : "no") << "\n";
    s << r.conclusion << "\n";
    emit(o.out, s.str(), out);
    return r.holds ? kExitOk : kExitVerificationFailed;
}

int cmd_shift_demo(const Options& o, std::ostream& out) {
    std::string csv = "n,sigma_min,p_norm\n";
    for (Index n = 2; n <= o.max_n; n += 2) {
        const TruncatedShiftDemo d = truncated_shift_demo(n);
        csv += std::to_string(n) + "," + format_double(d.sigma_min) + "," + format_double(d.p_norm) + "\n";
    }
    emit(o.out, csv, out);
    return kExitOk;
}

int cmd_field(const Options& o, std::ostream& out) {
    const auto files = matrix_files(o.in_dir);
    if (files.empty()) throw InputError("no .txt or .json matrices in '" + o.in_dir + "'");
    MatrixField field;
    for (const fs::path& p : files) field.points.push_back(read_matrix(p));
    field.n = field.points.front().rows();
    emit(o.out, field_to_json(strongly_clean_field(field)), out);
    return kExitOk;
}

CorpusConfig corpus_config(const Options& o) {
    CorpusConfig c;
    c.seed = o.seed;
    c.count = o.count;
    c.min_n = o.min_n;
    c.max_n = o.corpus_max_n;
    c.families = parse_families(o.families);
    return c;
}

int cmd_corpus(const Options& o, std::ostream& out) {
    const auto corpus = generate_corpus(corpus_config(o));
    const bool json = o.format == "json";
    fs::create_directories(o.out_dir);
    for (const CorpusMember& m : corpus) {
        char name[64];
        std::snprintf(name, sizeof name, "member_%05zu_", m.index);
        const fs::path path = fs::path(o.out_dir) / (name + std::string(to_string(m.family)) + (json ? ".json" : ".txt"));
        write_matrix(path, m.matrix);
    }
    out << corpus.size() << " matrices written to " << o.out_dir << "\n";
    return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out) {
    const auto corpus = generate_corpus(corpus_config(o));
    const CleanMode mode = parse_mode(o.mode);
    std::vector<CleanCertificate> certs;
    certs.reserve(corpus.size());
    bool all_verified = true;
    for (const CorpusMember& m : corpus) {
        certs.push_back(decompose(m.matrix, mode));
        all_verified = all_verified && verify_certificate(m.matrix, certs.back(), o.tol).passed();
    }
    const ReportFormat format = o.format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
    emit(o.out, emit_report(certs, format, o.tol), out);
    return all_verified ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    try {
        o.tol = default_tolerance();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    CLI::App app{"Idempotent-plus-invertible decompositions of complex matrices", "cleandec"};
    app.require_subcommand(1);
    auto tol_check = CLI::PositiveNumber;

    auto* decompose = app.add_subcommand("decompose", "Decompose T = (T - P) + P and write a certificate");
    decompose->add_option("--mode", o.mode, "clean|strong|star|almost-star")
        ->check(CLI::IsMember({"clean", "strong", "star", "almost-star"}));
    decompose->add_option("--in", o.in, "Input matrix")->required();
    decompose->add_option("--out", o.out, "Certificate path (stdout if omitted)");
    decompose->add_option("--tol", o.tol, "Verification tolerance")->check(tol_check);

    auto* verify = app.add_subcommand("verify", "Check a certificate against its matrix");
    verify->add_option("--in", o.in, "Input matrix")->required();
    verify->add_option("--cert", o.cert, "Certificate JSON")->required();
    verify->add_option("--tol", o.tol, "Tolerance")->check(tol_check);

    auto* halmos = app.add_subcommand("halmos", "Canonical form of two orthogonal projections");
    halmos->add_option("--e", o.e, "First projection")->required();
    halmos->add_option("--f", o.f, "Second projection")->required();
    halmos->add_option("--out", o.out, "Output JSON (stdout if omitted)");
    halmos->add_option("--delta", o.delta, "Splitting tolerance")->check(CLI::Range(1e-15, 0.49));
    halmos->add_option("--tol", o.tol, "Projection validation tolerance")->check(tol_check);

    auto* riesz = app.add_subcommand("riesz", "Spectral idempotent for eigenvalues inside a circle");
    riesz->add_option("--in", o.in, "Input matrix")->required();
    riesz->add_option("--radius", o.radius, "auto or a positive radius");
    riesz->add_option("--method", o.method, "schur|quadrature")->check(CLI::IsMember({"schur", "quadrature"}));
    riesz->add_option("--out", o.out, "Output JSON (stdout if omitted)");

    auto* witness = app.add_subcommand("witness", "Counterexamples and sharpness data");
    witness->require_subcommand(1);
    auto* shift_table = witness->add_subcommand("shift-table", "||(V_n - I)^{-1}|| against sqrt(n)");
    shift_table->add_option("--max-n", o.max_n, "Largest n")->check(CLI::Range(1, 4096));
    shift_table->add_option("--out", o.out, "CSV path (stdout if omitted)");
    auto* star = witness->add_subcommand("star-counterexample", "Projections commuting with [[1,1],[0,0]]");
    star->add_option("--grid-step", o.grid_step, "Grid step")->check(CLI::Range(1e-4, 0.5));
    star->add_option("--out", o.out, "Report path (stdout if omitted)");
    auto* shift_demo = witness->add_subcommand("shift-demo", "sigma_min of truncated S - P for even n");
    shift_demo->add_option("--max-n", o.max_n, "Largest n")->check(CLI::Range(2, 4096));
    shift_demo->add_option("--out", o.out, "CSV path (stdout if omitted)");

    auto* field = app.add_subcommand("field-decompose", "Strongly clean decomposition of a matrix field");
    field->add_option("--in-dir", o.in_dir, "Directory of member matrices (.txt/.json, name order)")->required();
    field->add_option("--out", o.out, "Output JSON (stdout if omitted)");

    auto add_corpus_options = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Corpus seed");
        sub->add_option("--count", o.count, "Number of matrices");
        sub->add_option("--min-n", o.min_n, "Smallest dimension")->check(CLI::Range(1, 512));
        sub->add_option("--max-n", o.corpus_max_n, "Largest dimension")->check(CLI::Range(1, 512));
        sub->add_option("--families", o.families, "Comma-separated families or 'all'");
    };
    auto* corpus = app.add_subcommand("corpus", "Write a seeded test corpus");
    add_corpus_options(corpus);
    corpus->add_option("--out-dir", o.out_dir, "Output directory")->required();
    corpus->add_option("--format", o.format, "text|json")->check(CLI::IsMember({"text", "json"}));

    auto* report = app.add_subcommand("report", "Decompose a seeded corpus and tabulate the certificates");
    add_corpus_options(report);
    report->add_option("--mode", o.mode, "clean|strong|star|almost-star")
        ->check(CLI::IsMember({"clean", "strong", "star", "almost-star"}));
    report->add_option("--format", o.format, "csv|markdown")->check(CLI::IsMember({"csv", "markdown"}));
    report->add_option("--out", o.out, "Output path (stdout if omitted)");
    report->add_option("--tol", o.tol, "Verification tolerance")->check(tol_check);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitBadInput;
    }

    try {
        if (*decompose) return cmd_decompose(o, out, err);
        if (*verify) return cmd_verify(o, out);
        if (*halmos) return cmd_halmos(o, out);
        if (*riesz) return cmd_riesz(o, out);
        if (*shift_table) return cmd_shift_table(o, out);
        if (*star) return cmd_star_counterexample(o, out);
        if (*shift_demo) return cmd_shift_demo(o, out);
        if (*field) return cmd_field(o, out);
        if (*corpus) return cmd_corpus(o, out);
        if (*report) return cmd_report(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    err << app.help();
    return kExitBadInput;
}

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args, out, err);
}

}  // namespace cleandec
