#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cleandec/clean.hpp"
#include "cleandec/corpus.hpp"
#include "cleandec/errors.hpp"
#include "cleandec/halmos.hpp"
#include "cleandec/io.hpp"
#include "cleandec/spectral.hpp"
#include "cleandec/witness.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cleandec;

namespace {

OrthoProjection as_projection(const Matrix& m, double tol) { return OrthoProjection::from_matrix(m, tol); }

py::dict report_dict(const VerificationReport& r) {
    py::list checks;
    for (const CheckResult& c : r.checks) {
        checks.append(py::dict("name"_a = c.name, "value"_a = c.value, "threshold"_a = c.threshold, "pass"_a = c.pass));
    }
    py::dict out("passed"_a = r.passed(), "checks"_a = checks);
    out["inverse_norm"] = r.inverse_norm ? py::object(py::float_(*r.inverse_norm)) : py::object(py::none());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Idempotent-plus-invertible decompositions of complex matrices";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
    (void)input_error;

    py::class_<CleanCertificate>(m, "Certificate")
        .def_property_readonly("mode", [](const CleanCertificate& c) { return std::string(to_string(c.mode)); })
        .def_readonly("p", &CleanCertificate::p)
        .def_readonly("inverse_norm", &CleanCertificate::inverse_norm)
        .def_property_readonly("claimed_bound", &CleanCertificate::claimed_bound)
        .def_readonly("log_claimed_bound", &CleanCertificate::log_claimed_bound)
        .def_readonly("residual_idempotent", &CleanCertificate::residual_idempotent)
        .def_readonly("residual_commute", &CleanCertificate::residual_commute)
        .def_readonly("residual_selfadjoint", &CleanCertificate::residual_selfadjoint)
        .def_readonly("branch", &CleanCertificate::branch)
        .def_readonly("parameter", &CleanCertificate::parameter)
        .def("to_json", &certificate_to_json)
        .def_static("from_json", [](const std::string& s) { return certificate_from_json(s); })
        .def("__repr__", [](const CleanCertificate& c) {
            return "<Certificate mode=" + std::string(to_string(c.mode)) + " n=" + std::to_string(c.n()) +
                   " inverse_norm=" + format_double(c.inverse_norm) + ">";
        });

    py::class_<HalmosForm>(m, "HalmosForm")
        .def_readonly("w", &HalmosForm::w)
        .def_readonly("d1", &HalmosForm::d1)
        .def_readonly("d2", &HalmosForm::d2)
        .def_readonly("d3", &HalmosForm::d3)
        .def_readonly("d4", &HalmosForm::d4)
        .def_readonly("d_extra", &HalmosForm::d_extra)
        .def_readonly("h", &HalmosForm::h)
        .def_readonly("residual_unitary", &HalmosForm::residual_unitary)
        .def_readonly("residual_e", &HalmosForm::residual_e)
        .def_readonly("residual_f", &HalmosForm::residual_f)
        .def("canonical_e", &HalmosForm::canonical_e)
        .def("canonical_f", &HalmosForm::canonical_f);

    m.def("clean_decompose", &clean_decompose, "t"_a);
    m.def("strongly_clean_decompose", &strongly_clean_decompose, "t"_a);
    m.def("star_clean_closed_range", &star_clean_closed_range, "t"_a);
    m.def("almost_star_clean_decompose", &almost_star_clean_decompose, "t"_a);
    m.def(
        "decompose", [](const Matrix& t, const std::string& mode) { return decompose(t, parse_mode(mode)); }, "t"_a,
        "mode"_a = "clean");
    m.def(
        "verify_certificate",
        [](const Matrix& t, const CleanCertificate& c, double tol) { return report_dict(verify_certificate(t, c, tol)); },
        "t"_a, "certificate"_a, "tol"_a = 1e-8);

    m.def(
        "halmos_form",
        [](const Matrix& e, const Matrix& f, double delta, double tol) {
            return halmos_form(as_projection(e, tol), as_projection(f, tol), delta);
        },
        "e"_a, "f"_a, "delta"_a = kConstructionTol, "tol"_a = 1e-8);
    m.def(
        "difference_invertibility",
        [](const Matrix& e, const Matrix& f, double tol) {
            const DifferenceInvertibility d = difference_invertibility(as_projection(e, tol), as_projection(f, tol));
            return py::dict("invertible_on_join"_a = d.invertible_on_join, "norm_of_inverse"_a = d.norm_of_inverse,
                            "ef_norm"_a = d.ef_norm, "formula_norm"_a = d.formula_norm,
                            "identity_ok"_a = d.identity_ok);
        },
        "e"_a, "f"_a, "tol"_a = 1e-8);

    m.def(
        "riesz_projection",
        [](const Matrix& a, double r, const std::string& method) {
            RieszOptions opts;
            opts.method = method == "quadrature" ? RieszMethod::Quadrature : RieszMethod::SchurSubspace;
            const RieszResult res = riesz_projection(a, r, opts);
            return py::dict("p"_a = res.projector.matrix(), "inside_count"_a = res.inside_count,
                            "resolvent_bound"_a = res.resolvent_bound, "nodes_used"_a = res.nodes_used);
        },
        "a"_a, "radius"_a, "method"_a = "schur");
    m.def(
        "paper_constants",
        [](double norm, Index n) {
            const PaperConstants c = paper_constants(norm, n);
            return py::dict("log_c1"_a = c.log_c1, "log_c2"_a = c.log_c2);
        },
        "norm"_a, "n"_a);

    m.def("shift_matrix", &shift_matrix, "n"_a);
    m.def(
        "shift_inverse_lowerbound_table",
        [](Index n_max) {
            py::list rows;
            for (const WitnessRow& r : shift_inverse_lowerbound_table(n_max).rows) {
                rows.append(py::make_tuple(r.n, r.measured, r.reference, r.pass));
            }
            return rows;
        },
        "n_max"_a);
    m.def("strong_star_clean_counterexample", []() {
        const StarCounterexampleReport r = strong_star_clean_counterexample();
        return py::dict("holds"_a = r.holds, "projections"_a = r.symbolic_projections,
                        "grid_min_commutator"_a = r.grid_min_commutator, "det_t"_a = r.det_t,
                        "det_t_minus_identity"_a = r.det_t_minus_identity);
    });

    m.def(
        "generate_corpus",
        [](std::uint64_t seed, std::size_t count, Index min_n, Index max_n) {
            CorpusConfig c;
            c.seed = seed;
            c.count = count;
            c.min_n = min_n;
            c.max_n = max_n;
            py::list out;
            for (const CorpusMember& mem : generate_corpus(c)) {
                out.append(py::make_tuple(std::string(to_string(mem.family)), mem.matrix));
            }
            return out;
        },
        "seed"_a = 0, "count"_a = 100, "min_n"_a = 1, "max_n"_a = 16);

    m.def("parse_matrix_text", [](const std::string& s) { return parse_matrix_text(s); }, "text"_a);
    m.def("emit_matrix_text", &emit_matrix_text, "m"_a);
}
