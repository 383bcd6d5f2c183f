#include "cleandec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "cleandec/errors.hpp"

namespace cleandec {

// ---------------------------------------------------------------------------
// Schur form

SchurForm schur(const Matrix& a) {
    require_square(a, "schur");
    require_finite(a, "schur");
    Eigen::ComplexSchur<Matrix> cs(a, true);
    if (cs.info() != Eigen::Success) {
        throw NumericalFailure("schur: QR iteration did not converge");
    }
    SchurForm out;
    out.q = cs.matrixU();
    out.u = cs.matrixT().triangularView<Eigen::Upper>();
    out.residual = operator_norm(a - out.q * out.u * out.q.adjoint());
    return out;
}

namespace {

// Exchanges the diagonal entries k and k+1 of the triangular factor.
void swap_adjacent(SchurForm& form, Index k) {
    Matrix& t = form.u;
    const Complex a = t(k, k);
    const Complex b = t(k + 1, k + 1);
    // (t(k,k+1), b - a) is the eigenvector of the 2x2 block for eigenvalue b
    const Complex x = t(k, k + 1);
    const Complex y = b - a;
    const double len = std::hypot(std::abs(x), std::abs(y));
    if (len == 0.0) return;
    const Complex c = x / len;
    const Complex s = y / len;
    Eigen::Matrix2cd g;
    g << c, -std::conj(s), s, std::conj(c);

    const Index n = t.rows();
    t.middleCols(k, 2) = t.middleCols(k, 2) * g;
    t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
    form.q.middleCols(k, 2) = form.q.middleCols(k, 2) * g;
    t(k + 1, k) = 0.0;
    t(k, k) = b;
    t(k + 1, k + 1) = a;
    (void)n;
}

}  // namespace

Index reorder_schur(SchurForm& form, const std::function<bool(Complex)>& select) {
    const Index n = form.u.rows();
    Index placed = 0;
    for (Index j = 0; j < n; ++j) {
        if (!select(form.u(j, j))) continue;
        for (Index k = j - 1; k >= placed; --k) swap_adjacent(form, k);
        ++placed;
    }
    return placed;
}

// ---------------------------------------------------------------------------
// Nilpotent perturbation

NilpotentBound nilpotent_perturbation_bound(const Matrix& a, const Matrix& b) {
    require_square(a, "nilpotent_perturbation_bound");
    require_same_size(a, b, "nilpotent_perturbation_bound");
    require_finite(a, "nilpotent_perturbation_bound");
    require_finite(b, "nilpotent_perturbation_bound");
    const Index n = a.rows();
    const RealVector sa = singular_values(a);
    if (!(sa(n - 1) > 1e-14 * sa(0))) {
        throw PreconditionError("nilpotent_perturbation_bound: A is singular");
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    const Matrix ainv_b = lu.solve(b);
    const double norm_ainv = 1.0 / sa(n - 1);
    const double norm_nb = operator_norm(ainv_b);

    Matrix power = Matrix::Identity(n, n);
    for (Index k = 0; k < n; ++k) power = power * ainv_b;
    const double nil_tol = 1e-10 * (std::pow(norm_nb, static_cast<double>(n)) + 1.0);
    if (operator_norm(power) > nil_tol) {
        throw PreconditionError("nilpotent_perturbation_bound: (A^{-1}B)^n is not zero");
    }

    double sum = 0.0;
    double term = 1.0;
    for (Index k = 0; k < n; ++k) {
        sum += term;
        term *= norm_nb;
    }
    const double bound = norm_ainv * sum;
    const double sigma = smallest_singular_value(a - b);
    const double measured = sigma > 0.0 ? 1.0 / sigma : std::numeric_limits<double>::infinity();
    if (measured > bound * (1.0 + 1e-10)) {
        throw NumericalFailure("nilpotent_perturbation_bound: measured inverse norm exceeds bound");
    }
    return {bound, measured};
}

// ---------------------------------------------------------------------------
// Separating radius

double choose_separating_radius(std::span<const Complex> eigenvalues, Index n) {
    std::vector<double> moduli;
    moduli.reserve(eigenvalues.size());
    for (const Complex& z : eigenvalues) moduli.push_back(std::abs(z));
    std::sort(moduli.begin(), moduli.end());
    if (moduli.empty() || !(moduli.front() < 0.25) || !(moduli.back() > 0.75)) {
        throw PreconditionError(
            "choose_separating_radius: need an eigenvalue inside |z| < 1/4 and one outside |z| > 3/4");
    }

    auto distance = [&](double r) {
        double d = std::numeric_limits<double>::infinity();
        for (double m : moduli) d = std::min(d, std::abs(r - m));
        return d;
    };

    std::vector<double> candidates{0.25, 0.75};
    for (std::size_t i = 0; i + 1 < moduli.size(); ++i) {
        candidates.push_back(std::clamp(0.5 * (moduli[i] + moduli[i + 1]), 0.25, 0.75));
    }
    std::sort(candidates.begin(), candidates.end());

    double best_r = candidates.front();
    double best_d = -1.0;
    for (double r : candidates) {
        const double d = distance(r);
        if (d > best_d) {
            best_d = d;
            best_r = r;
        }
    }
    if (best_d < 1.0 / (4.0 * static_cast<double>(std::max<Index>(n, 1))) * (1.0 - 1e-12)) {
        throw NumericalFailure("choose_separating_radius: no radius keeps distance 1/(4n)");
    }
    return best_r;
}

// ---------------------------------------------------------------------------
// Log-space constants

namespace {

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

double safe_log(double x) {
    return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

}  // namespace

double log_geometric_sum(double log_x, Index n) {
    double acc = 0.0;  // k = 0 term
    for (Index k = 1; k < n; ++k) acc = log_add_exp(acc, static_cast<double>(k) * log_x);
    return acc;
}

PaperConstants paper_constants(double norm, Index n) {
    if (!(norm >= 0.0) || n < 1) throw InputError("paper_constants: need norm >= 0 and n >= 1");
    const double dn = static_cast<double>(n);
    PaperConstants c;
    c.n = n;
    c.norm = norm;
    c.log_c1 = std::log(3.0 * dn) + log_geometric_sum(safe_log(8.0 * dn * norm), n);
    const double log_ratio = log_add_exp(safe_log(8.0 * norm), std::log(4.0) + c.log_c1);
    c.log_c2 = std::log(4.0) + log_geometric_sum(log_ratio, n);
    return c;
}

double log_resolvent_bound(double norm, Index n) {
    const double dn = static_cast<double>(n);
    return std::log(4.0 * dn) + log_geometric_sum(safe_log(8.0 * dn * norm), n);
}

double log_one_sided_bound(double norm, Index n) {
    return std::log(4.0) + log_geometric_sum(safe_log(8.0 * norm), n);
}

// ---------------------------------------------------------------------------
// Riesz projection

namespace {

Index default_nodes(Index n) { return std::max<Index>(64, 16 * n); }

// Projector onto the leading m Schur vectors along the trailing invariant subspace.
Matrix projector_from_ordered_schur(const SchurForm& form, Index m) {
    const Index n = form.u.rows();
    if (m == 0) return Matrix::Zero(n, n);
    if (m == n) return Matrix::Identity(n, n);
    const Index k = n - m;
    const Matrix t11 = form.u.topLeftCorner(m, m);
    const Matrix t12 = form.u.topRightCorner(m, k);
    const Matrix t22 = form.u.bottomRightCorner(k, k);
    // T11 X - X T22 = T12, column by column
    Matrix x(m, k);
    for (Index j = 0; j < k; ++j) {
        Vector rhs = t12.col(j);
        if (j > 0) rhs += x.leftCols(j) * t22.col(j).head(j);
        Matrix shifted = t11;
        shifted.diagonal().array() -= t22(j, j);
        x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
    }
    Matrix pt = Matrix::Zero(n, n);
    pt.topLeftCorner(m, m).setIdentity();
    pt.topRightCorner(m, k) = x;
    return form.q * pt * form.q.adjoint();
}

Matrix contour_sum(const Matrix& a, double r, Index count, Index offset_num, Index offset_den) {
    const Index n = a.rows();
    Matrix acc = Matrix::Zero(n, n);
    for (Index k = 0; k < count; ++k) {
        const double theta = 2.0 * std::numbers::pi *
                             (static_cast<double>(k) + static_cast<double>(offset_num) /
                                                           static_cast<double>(offset_den)) /
                             static_cast<double>(count);
        const Complex z = std::polar(r, theta);
        Matrix shifted = -a;
        shifted.diagonal().array() += z;
        Eigen::PartialPivLU<Matrix> lu(shifted);
        acc += z * lu.inverse();
    }
    return acc;
}

Matrix quadrature_projector(const Matrix& a, double r, Index initial_nodes, Index& used) {
    constexpr Index kMaxNodes = Index{1} << 16;
    Index nodes = initial_nodes;
    Matrix sum = contour_sum(a, r, nodes, 0, 1);
    Matrix p = sum / static_cast<double>(nodes);
    while (nodes < kMaxNodes) {
        // midpoints of the current grid
        sum += contour_sum(a, r, nodes, 1, 2);
        nodes *= 2;
        Matrix refined = sum / static_cast<double>(nodes);
        const double change = operator_norm(refined - p);
        p = std::move(refined);
        if (change <= 1e-13 * std::max(1.0, operator_norm(p))) {
            used = nodes;
            return p;
        }
    }
    throw NumericalFailure("riesz_projection: contour quadrature did not converge");
}

double sampled_resolvent_norm(const Matrix& a, double r, Index nodes) {
    double worst = 0.0;
    for (Index k = 0; k < nodes; ++k) {
        const Complex z = std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                           static_cast<double>(nodes));
        Matrix shifted = -a;
        shifted.diagonal().array() += z;
        worst = std::max(worst, 1.0 / smallest_singular_value(shifted));
    }
    return worst;
}

RieszResult riesz_from_schur(const Matrix& a, SchurForm form, double r, const RieszOptions& options) {
    const Index n = a.rows();
    const double margin = 1.0 / (8.0 * static_cast<double>(n));
    for (Index i = 0; i < n; ++i) {
        if (std::abs(std::abs(form.u(i, i)) - r) < margin) {
            throw PreconditionError("riesz_projection: eigenvalue within 1/(8n) of the contour");
        }
    }
    const Index inside = reorder_schur(form, [r](Complex z) { return std::abs(z) < r; });
    Matrix p = projector_from_ordered_schur(form, inside);

    const Index nodes = options.nodes > 0 ? options.nodes : default_nodes(n);
    Index used = 0;
    if (options.method == RieszMethod::Quadrature) {
        Matrix pq = quadrature_projector(a, r, nodes, used);
        if (operator_norm(pq - p) > 1e-6) {
            throw NumericalFailure(
                "riesz_projection: quadrature and invariant-subspace projectors disagree");
        }
        p = std::move(pq);
    }

    RieszResult out;
    out.radius = r;
    const double scale = std::max(1.0, operator_norm(p));
    out.projector = Idempotent(p, 1e-8 * scale);
    out.inside_count = inside;
    out.method = options.method;
    out.nodes_used = used;
    if (options.sample_resolvent) out.resolvent_bound = sampled_resolvent_norm(a, r, nodes);

    const double trace = p.trace().real();
    if (std::abs(trace - static_cast<double>(inside)) > 1e-6 * scale) {
        throw NumericalFailure("riesz_projection: trace does not match the inside eigenvalue count");
    }
    return out;
}

}  // namespace

RieszResult riesz_projection(const Matrix& a, double r, const RieszOptions& options) {
    require_square(a, "riesz_projection");
    require_finite(a, "riesz_projection");
    if (!(r > 0.0)) throw InputError("riesz_projection: radius must be positive");
    return riesz_from_schur(a, schur(a), r, options);
}

// ---------------------------------------------------------------------------
// Strongly clean decomposition

namespace {

std::string_view branch_name(StrongBranch b) {
    switch (b) {
        case StrongBranch::Zero: return "zero";
        case StrongBranch::Identity: return "identity";
        case StrongBranch::Riesz: return "riesz";
    }
    return "zero";
}

struct StrongAttempt {
    Matrix p;
    std::optional<double> radius;
};

StrongAttempt attempt_branch(const Matrix& a, const SchurForm& form, StrongBranch branch,
                             std::optional<double> radius) {
    const Index n = a.rows();
    switch (branch) {
        case StrongBranch::Zero: return {Matrix::Zero(n, n), std::nullopt};
        case StrongBranch::Identity: return {Matrix::Identity(n, n), std::nullopt};
        case StrongBranch::Riesz: {
            RieszOptions opts;
            opts.sample_resolvent = false;
            RieszResult rr = riesz_from_schur(a, form, *radius, opts);
            return {rr.projector.matrix(), radius};
        }
    }
    return {};
}

// Fills the measured fields; returns false when A - P is not numerically invertible
// or the commutation residual is out of tolerance.
bool measure_strong(const Matrix& a, CleanCertificate& cert) {
    const Matrix diff = a - cert.p;
    const RealVector s = singular_values(diff);
    const double smin = s(s.size() - 1);
    const double pnorm = operator_norm(cert.p);
    const double anorm = operator_norm(a);
    cert.residual_idempotent = operator_norm(cert.p * cert.p - cert.p);
    cert.residual_commute = operator_norm(cert.p * a - a * cert.p);
    if (!(smin > 1e-12 * std::max(1.0, s(0)))) return false;
    cert.inverse_norm = 1.0 / smin;
    if (*cert.residual_commute > 1e-8 * anorm * (1.0 + pnorm)) return false;
    const double scale = std::max(1.0, pnorm);
    if (cert.residual_idempotent > 1e-8 * scale * scale) return false;
    if (cert.log_claimed_bound &&
        std::log(cert.inverse_norm) > *cert.log_claimed_bound + std::log1p(kCertificationSlack)) {
        return false;
    }
    return true;
}

StrongBranch primary_branch(const Vector& eigs) {
    bool all_outer = true;
    bool all_inner = true;
    for (Index i = 0; i < eigs.size(); ++i) {
        const double m = std::abs(eigs(i));
        all_outer = all_outer && m >= 0.25;
        all_inner = all_inner && m <= 0.75;
    }
    if (all_outer) return StrongBranch::Zero;
    if (all_inner) return StrongBranch::Identity;
    return StrongBranch::Riesz;
}

}  // namespace

CleanCertificate strongly_clean_decompose(const Matrix& a) {
    require_square(a, "strongly_clean_decompose");
    require_finite(a, "strongly_clean_decompose");
    const Index n = a.rows();
    const double norm = operator_norm(a);
    const SchurForm form = schur(a);
    const Vector eigs = form.eigenvalues();
    const StrongBranch first = primary_branch(eigs);

    std::vector<StrongBranch> order{first};
    for (StrongBranch b : {StrongBranch::Identity, StrongBranch::Zero}) {
        if (b != first) order.push_back(b);
    }

    for (std::size_t attempt = 0; attempt < order.size(); ++attempt) {
        const StrongBranch branch = order[attempt];
        std::optional<double> radius;
        if (branch == StrongBranch::Riesz) {
            std::vector<Complex> ev(eigs.data(), eigs.data() + eigs.size());
            radius = choose_separating_radius(ev, n);
        }
        CleanCertificate cert;
        cert.mode = CleanMode::Strong;
        cert.branch = std::string(branch_name(branch));
        try {
            StrongAttempt att = attempt_branch(a, form, branch, radius);
            cert.p = std::move(att.p);
            cert.parameter = att.radius;
        } catch (const Error&) {
            continue;
        }
        // bounds are only justified on the branch the spectrum selects
        if (attempt == 0) {
            cert.log_claimed_bound = branch == StrongBranch::Riesz ? paper_constants(norm, n).log_c2
                                                                   : log_one_sided_bound(norm, n);
        } else {
            cert.branch += "-fallback";
        }
        if (measure_strong(a, cert)) return cert;
    }
    throw NumericalFailure("strongly_clean_decompose: no branch produced an invertible A - P");
}

// ---------------------------------------------------------------------------
// Matrix fields

FieldCertificate strongly_clean_field(const MatrixField& field) {
    if (field.points.empty()) throw InputError("strongly_clean_field: empty field");
    const Index n = field.n;
    double norm = 0.0;
    for (const Matrix& m : field.points) {
        if (m.rows() != n || m.cols() != n) {
            throw InputError("strongly_clean_field: member dimension differs from the field");
        }
        require_finite(m, "strongly_clean_field");
        norm = std::max(norm, operator_norm(m));
    }

    FieldCertificate out;
    const PaperConstants constants = paper_constants(norm, n);
    out.log_c2 = constants.log_c2;
    out.log_cell_diameter = -std::log(2.0) - constants.log_c2;

    auto per_member = [&] {
        out.cellwise_uniform = false;
        out.cells.clear();
        out.certificates.clear();
        for (std::size_t i = 0; i < field.points.size(); ++i) {
            CleanCertificate cert = strongly_clean_decompose(field.points[i]);
            FieldCell cell;
            cell.members = {i};
            cell.branch = cert.branch.starts_with("riesz")      ? StrongBranch::Riesz
                          : cert.branch.starts_with("identity") ? StrongBranch::Identity
                                                                : StrongBranch::Zero;
            cell.radius = cert.parameter;
            out.cells.push_back(std::move(cell));
            out.certificates.push_back(std::move(cert));
        }
        return out;
    };

    // below this scale the cell condition can only merge identical members
    const double resolution = std::numeric_limits<double>::epsilon() * std::max(1.0, norm);
    if (out.log_cell_diameter < std::log(resolution)) return per_member();

    // greedy clustering in input order; a point joins the first cell it keeps within diameter
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        bool placed = false;
        for (FieldCell& cell : out.cells) {
            bool fits = true;
            for (std::size_t j : cell.members) {
                const double d = operator_norm(field.points[i] - field.points[j]);
                if (d > 0.0 && std::log(d) > out.log_cell_diameter) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                cell.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) out.cells.push_back(FieldCell{{i}, StrongBranch::Zero, std::nullopt});
    }

    // bounds from the field argument: 2 C2 off the annulus, 4 sum (8||A|| + 6 C2)^k on it
    const double log_one_sided = std::log(2.0) + constants.log_c2;
    const double log_riesz =
        std::log(4.0) +
        log_geometric_sum(log_add_exp(safe_log(8.0 * norm), std::log(6.0) + constants.log_c2), n);

    out.certificates.resize(field.points.size());
    for (FieldCell& cell : out.cells) {
        const Matrix& anchor = field.points[cell.members.front()];
        const SchurForm anchor_form = schur(anchor);
        const Vector eigs = anchor_form.eigenvalues();
        cell.branch = primary_branch(eigs);
        if (cell.branch == StrongBranch::Riesz) {
            std::vector<Complex> ev(eigs.data(), eigs.data() + eigs.size());
            cell.radius = choose_separating_radius(ev, n);
        }
        for (std::size_t idx : cell.members) {
            const Matrix& member = field.points[idx];
            CleanCertificate cert;
            cert.mode = CleanMode::Strong;
            cert.branch = std::string(branch_name(cell.branch));
            cert.parameter = cell.radius;
            cert.log_claimed_bound = cell.branch == StrongBranch::Riesz ? log_riesz : log_one_sided;
            bool ok = false;
            try {
                const SchurForm form = idx == cell.members.front() ? anchor_form : schur(member);
                cert.p = attempt_branch(member, form, cell.branch, cell.radius).p;
                ok = measure_strong(member, cert);
            } catch (const Error&) {
                ok = false;
            }
            if (!ok) return per_member();
            out.certificates[idx] = std::move(cert);
        }
    }
    return out;
}

}  // namespace cleandec
