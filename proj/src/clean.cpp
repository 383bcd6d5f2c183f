#include "cleandec/clean.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "cleandec/errors.hpp"
#include "cleandec/spectral.hpp"

namespace cleandec {

namespace {

constexpr std::array<double, 5> kSplitRetries{1e-10, 1e-9, 1e-11, 1e-8, 1e-12};

// Halmos form with no unpaired corner dimensions, trying a few splitting tolerances.
// A small angle pushed into a corner costs about sqrt(h) in reconstruction, so a
// split is only taken outright when it reconstructs E and F; otherwise the best
// consistent one wins.
HalmosForm paired_halmos_form(const OrthoProjection& e, const OrthoProjection& f) {
    constexpr double kGoodResidual = 1e-9;
    std::optional<HalmosForm> best;
    auto residual = [](const HalmosForm& h) { return std::max(h.residual_e, h.residual_f); };
    for (double delta : kSplitRetries) {
        try {
            HalmosForm form = halmos_form(e, f, delta);
            if (form.d_extra != 0) continue;
            if (residual(form) <= kGoodResidual) return form;
            if (!best || residual(form) < residual(*best)) best = std::move(form);
        } catch (const AmbiguousSplit&) {
        }
    }
    if (best) return std::move(*best);
    throw NumericalFailure("no splitting tolerance gives a consistent two-projection form");
}

Matrix orthonormal_range(const Matrix& m) {
    const Index n = m.rows();
    if (m.cols() == 0) return Matrix(n, 0);
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(n, m.cols());
}

double floor_for(double norm) { return 1e-12 * std::max(1.0, norm); }

void measure(const Matrix& t, CleanCertificate& cert) {
    const Matrix diff = t - cert.p;
    const RealVector s = singular_values(diff);
    const double smin = s(s.size() - 1);
    if (!(smin > floor_for(s(0)))) {
        throw NumericalFailure(std::string(to_string(cert.mode)) + ": T - P is numerically singular");
    }
    cert.inverse_norm = 1.0 / smin;
    cert.residual_idempotent = operator_norm(cert.p * cert.p - cert.p);
    if (cert.log_claimed_bound &&
        std::log(cert.inverse_norm) > *cert.log_claimed_bound + std::log1p(kCertificationSlack)) {
        throw NumericalFailure(std::string(to_string(cert.mode)) +
                               ": measured inverse norm exceeds the claimed bound");
    }
}

double choose_cut(const RealVector& sigma) {
    auto clear_of = [&](double c) {
        for (Index i = 0; i < sigma.size(); ++i) {
            if (std::abs(sigma(i) - c) <= kConstructionTol) return false;
        }
        return true;
    };
    if (clear_of(0.5)) return 0.5;
    double best = 0.5;
    double best_gap = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double c = 0.45 + 0.005 * i;
        double gap = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < sigma.size(); ++j) gap = std::min(gap, std::abs(sigma(j) - c) / c);
        if (gap > best_gap || (gap == best_gap && std::abs(c - 0.5) < std::abs(best - 0.5))) {
            best_gap = gap;
            best = c;
        }
    }
    if (!clear_of(best)) throw NumericalFailure("clean_decompose: no admissible spectral cut in [0.45, 0.55]");
    return best;
}

Matrix rank_one_sum(const Matrix& columns) { return columns * columns.adjoint(); }

}  // namespace

Matrix build_alignment(const HalmosForm& form, const OrthoProjection& e, const OrthoProjection& f) {
    if (e.dim() != form.n() || f.dim() != form.n()) throw InputError("build_alignment: dimension mismatch");
    if (form.d_extra != 0) {
        throw AmbiguousSplit("build_alignment: E∧F⊥ and (I-E)∧F have different dimensions");
    }
    const Matrix pe = form.paired_e();
    const Matrix pf = form.paired_f();
    const Matrix ge = form.generic_e();
    const Matrix gf = form.generic_f();
    Matrix a = pf * pe.adjoint();
    a += kI * (gf * ge.adjoint());
    return a;
}

CleanResult clean_decompose_traced(const Matrix& t) {
    require_square(t, "clean_decompose");
    require_finite(t, "clean_decompose");
    const Index n = t.rows();
    const SingularSplit s = singular_split(t);

    CleanResult out;
    CleanCertificate& cert = out.certificate;
    CleanTrace& trace = out.trace;
    cert.mode = CleanMode::Clean;

    if (s.sigma(0) <= 0.5) {
        cert.p = Matrix::Identity(n, n);
        cert.branch = "identity";
        cert.parameter = 0.5;
        cert.log_claimed_bound = std::log(4.0);
        trace.e = OrthoProjection::identity(n);
        trace.f = OrthoProjection::identity(n);
        trace.alignment = Matrix::Zero(n, n);
        trace.te_norm = s.sigma(0);
        measure(t, cert);
        return out;
    }

    const double c = choose_cut(s.sigma);
    Index above = 0;
    while (above < n && s.sigma(above) > c) ++above;
    trace.cut = c;
    trace.e = OrthoProjection::from_bases(s.v.rightCols(n - above), s.v.leftCols(above));
    // T maps the top right-singular vectors onto the top left-singular vectors
    const Matrix r2 = s.u.leftCols(above);
    trace.f = OrthoProjection::from_bases(s.u.rightCols(n - above), r2);
    trace.te_norm = above < n ? s.sigma(above) : 0.0;

    HalmosForm form = paired_halmos_form(trace.e, trace.f);
    trace.alignment = build_alignment(form, trace.e, trace.f);
    trace.form = std::move(form);

    Idempotent p = graph_idempotent(t, trace.e, trace.alignment);
    cert.p = p.matrix();
    cert.branch = c == 0.5 ? "halmos" : "halmos-moved-cut";
    cert.parameter = c;
    // A moved cut still earns 4 when ||TE|| <= 1/2 and T is bounded below by 1/2
    // off E; only a cut that splits the cluster needs the adjusted constant.
    const double lower = above > 0 ? s.sigma(above - 1) : std::numeric_limits<double>::infinity();
    const bool straddles_half = trace.te_norm <= 0.5 + kConstructionTol && lower >= 0.5 - kConstructionTol;
    cert.log_claimed_bound = std::log(straddles_half ? 4.0 : std::max(4.0, 2.0 / std::min(c, 1.0 - c)));

    const Matrix graph = (Matrix::Identity(n, n) + trace.alignment) * trace.e.basis();
    const Matrix r1 = orthonormal_range(graph);
    trace.coupling = (r1.cols() == 0 || r2.cols() == 0) ? 0.0 : operator_norm(r1.adjoint() * r2);

    measure(t, cert);
    const double pnorm = operator_norm(cert.p);
    if (pnorm > 2.0 + 2.0 * trace.te_norm + 1e-8) {
        throw NumericalFailure("clean_decompose: ||P|| exceeds 2 + 2||TE||");
    }
    return out;
}

CleanCertificate clean_decompose(const Matrix& t) { return clean_decompose_traced(t).certificate; }

CleanCertificate scalar_plus_small_decompose(Complex z, const Matrix& a, const OrthoProjection& block_e,
                                             const Matrix& t_full) {
    require_square(a, "scalar_plus_small_decompose");
    require_same_size(a, t_full, "scalar_plus_small_decompose");
    require_finite(a, "scalar_plus_small_decompose");
    require_finite(t_full, "scalar_plus_small_decompose");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError("scalar_plus_small_decompose: z must be finite");
    }
    const Index n = a.rows();
    if (block_e.dim() != n) throw InputError("scalar_plus_small_decompose: dimension mismatch");
    const Matrix& em = block_e.matrix();
    if (operator_norm(a - em * a * em) > kConstructionTol * std::max(1.0, operator_norm(a))) {
        throw PreconditionError("scalar_plus_small_decompose: A is not supported on the block");
    }
    const double distance = operator_norm(t_full - a);
    if (distance > 0.125) throw PreconditionError("scalar_plus_small_decompose: ||T - A|| > 1/8");

    const Index m = block_e.rank();
    const Matrix& b = block_e.basis();
    Matrix p = Matrix::Zero(n, n);
    double block_bound = 2.0;
    std::string branch;
    if (m > 0) {
        Matrix block = b.adjoint() * a * b;
        block.diagonal().array() += z;
        const CleanCertificate inner = clean_decompose(block);
        p = b * inner.p * b.adjoint();
        block_bound = std::max(block_bound, *inner.claimed_bound());
        branch = inner.branch + "/";
    }
    if (std::abs(z) < 0.5) {
        p += Matrix::Identity(n, n) - em;
        branch += "small-scalar";
    } else {
        branch += "large-scalar";
    }

    CleanCertificate cert;
    cert.mode = CleanMode::ScalarPlusSmall;
    cert.p = std::move(p);
    cert.branch = branch;
    cert.parameter = std::abs(z);
    // Neumann series: ||(X + D)^{-1}|| <= b / (1 - b/8) when ||X^{-1}|| <= b and ||D|| <= 1/8
    cert.log_claimed_bound = std::log(block_bound / (1.0 - block_bound / 8.0));
    Matrix shifted = t_full;
    shifted.diagonal().array() += z;
    measure(shifted, cert);
    return cert;
}

CleanCertificate almost_star_clean_decompose(const Matrix& t) {
    require_square(t, "almost_star_clean_decompose");
    require_finite(t, "almost_star_clean_decompose");
    const Index n = t.rows();
    const SingularSplit s = singular_split(t);
    const Index r = s.rank;

    CleanCertificate cert;
    cert.mode = CleanMode::AlmostStar;
    if (r == n) {
        cert.p = Matrix::Zero(n, n);
        cert.branch = "injective";
    } else {
        const OrthoProjection kernel = OrthoProjection::from_bases(s.v.rightCols(n - r), s.v.leftCols(r));
        const OrthoProjection co_kernel = OrthoProjection::from_bases(s.u.rightCols(n - r), s.u.leftCols(r));
        const HalmosForm form = paired_halmos_form(kernel, co_kernel);
        const double h = 1.0 / std::sqrt(2.0);
        const Matrix paired = h * (form.paired_e() + form.paired_f());
        const Matrix generic = h * (form.generic_e() + kI * form.generic_f());
        cert.p = rank_one_sum(form.e_and_f()) + rank_one_sum(paired) + rank_one_sum(generic);
        cert.branch = "halmos";
    }
    cert.residual_selfadjoint = operator_norm(cert.p - cert.p.adjoint());
    measure(t, cert);
    return cert;
}

CleanCertificate star_clean_closed_range(const Matrix& t) {
    require_square(t, "star_clean_closed_range");
    require_finite(t, "star_clean_closed_range");
    const Index n = t.rows();
    const SingularSplit s = singular_split(t);
    const Index r = s.rank;
    const OrthoProjection e = OrthoProjection::from_bases(s.v.leftCols(r), s.v.rightCols(n - r));
    const OrthoProjection f = OrthoProjection::from_bases(s.u.leftCols(r), s.u.rightCols(n - r));
    const HalmosForm form = paired_halmos_form(e, f);

    const double h = 1.0 / std::sqrt(2.0);
    const Matrix paired = h * (form.paired_e() + form.paired_f());
    const Matrix generic = h * (form.generic_e() - kI * form.generic_f());
    CleanCertificate cert;
    cert.mode = CleanMode::Star;
    cert.p = rank_one_sum(paired) + rank_one_sum(generic) + rank_one_sum(form.complement_meet());
    cert.branch = "halmos";
    cert.residual_selfadjoint = operator_norm(cert.p - cert.p.adjoint());
    measure(t, cert);
    return cert;
}

CleanCertificate decompose(const Matrix& t, CleanMode mode) {
    switch (mode) {
        case CleanMode::Clean: return clean_decompose(t);
        case CleanMode::Strong: return strongly_clean_decompose(t);
        case CleanMode::Star: return star_clean_closed_range(t);
        case CleanMode::AlmostStar: return almost_star_clean_decompose(t);
        case CleanMode::ScalarPlusSmall: break;
    }
    throw InputError("decompose: scalar-plus-small needs the block data; call scalar_plus_small_decompose");
}

// ---------------------------------------------------------------------------
// Verification

bool VerificationReport::passed() const {
    if (checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
    for (const CheckResult& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerificationReport verify_certificate(const Matrix& t, const CleanCertificate& cert, double tol) {
    VerificationReport report;
    auto add = [&](std::string name, double value, double threshold, bool pass) {
        report.checks.push_back({std::move(name), value, threshold, pass});
    };

    const bool dims = t.rows() == t.cols() && t.rows() > 0 && cert.p.rows() == t.rows() &&
                      cert.p.cols() == t.cols();
    add("dimensions", static_cast<double>(cert.p.rows()), static_cast<double>(t.rows()), dims);
    if (!dims) return report;
    const bool finite = t.allFinite() && cert.p.allFinite() && std::isfinite(cert.inverse_norm);
    add("finite", finite ? 0.0 : 1.0, 0.0, finite);
    if (!finite) return report;

    const Index n = t.rows();
    const Matrix& p = cert.p;
    const double pnorm = operator_norm(p);
    const double scale = std::max(1.0, pnorm);

    const double idem = operator_norm(p * p - p);
    add("idempotent", idem, tol * scale * scale, idem <= tol * scale * scale);

    const Matrix diff = t - p;
    // one-sided Jacobi, independent of the divide-and-conquer SVD used during construction
    const RealVector s = Eigen::JacobiSVD<Matrix>(diff).singularValues();
    const double smin = s(n - 1);
    const double floor = floor_for(s(0));
    const bool invertible = smin > floor;
    add(cert.mode == CleanMode::AlmostStar ? "injective" : "invertible", smin, floor, invertible);
    if (invertible) {
        const double inv = 1.0 / smin;
        report.inverse_norm = inv;
        const double rel = std::abs(inv - cert.inverse_norm) / inv;
        add("inverse_norm", rel, 1e-6, rel <= 1e-6);
        if (cert.log_claimed_bound) {
            const double slack = std::log1p(kCertificationSlack);
            const double excess = std::log(inv) - *cert.log_claimed_bound;
            add("bound", excess, slack, excess <= slack);
        }
    }

    if (cert.mode == CleanMode::Strong) {
        const double tnorm = operator_norm(t);
        const double comm = operator_norm(p * t - t * p);
        const double threshold = tol * tnorm * (1.0 + pnorm);
        add("commute", comm, threshold, comm <= threshold);
    }
    if (cert.mode == CleanMode::Star || cert.mode == CleanMode::AlmostStar) {
        const double herm = operator_norm(p - p.adjoint());
        add("selfadjoint", herm, tol, herm <= tol);
    }
    return report;
}

}  // namespace cleandec
