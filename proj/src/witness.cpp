#include "cleandec/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

#include "cleandec/errors.hpp"
#include "lapack_svd.hpp"

namespace cleandec {

Matrix shift_matrix(Index n) {
    if (n < 1) throw InputError("shift_matrix: n must be at least 1");
    Matrix v = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) v(i, i + 1) = 1.0;
    return v;
}

bool WitnessTable::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const WitnessRow& r) { return r.pass; });
}

WitnessTable shift_inverse_lowerbound_table(Index n_max) {
    if (n_max < 1) throw InputError("shift_inverse_lowerbound_table: n_max must be at least 1");
    WitnessTable table;
    table.rows.reserve(static_cast<std::size_t>(n_max));
    for (Index n = 1; n <= n_max; ++n) {
        // V_n - I is real, so the real SVD gives the same singular values
        Eigen::MatrixXd m = -Eigen::MatrixXd::Identity(n, n);
        for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
        const double smin = detail::lapack_singular_values(m)(n - 1);
        WitnessRow row;
        row.n = n;
        row.measured = 1.0 / smin;
        row.reference = std::sqrt(static_cast<double>(n));
        row.pass = row.measured >= row.reference - 1e-9;
        table.rows.push_back(row);
    }
    return table;
}

namespace {

double norm2x2(const Eigen::Matrix2cd& m) {
    return Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()(0);
}

// Rank-one projections v v^* commuting with t: v must be an eigenvector of t and of t^*.
std::vector<Matrix> commuting_rank_one(const Eigen::Matrix2cd& t) {
    const Complex tr = t.trace();
    const Complex det = t.determinant();
    const Complex disc = std::sqrt(tr * tr - 4.0 * det);
    std::vector<Eigen::Vector2cd> candidates;
    for (Complex lambda : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
        // kernel of t - lambda I from either row
        Eigen::Vector2cd v;
        const Complex a = t(0, 0) - lambda, b = t(0, 1), c = t(1, 0), d = t(1, 1) - lambda;
        if (std::abs(a) + std::abs(b) > std::abs(c) + std::abs(d)) {
            v << b, -a;
        } else {
            v << d, -c;
        }
        if (v.norm() == 0.0) {
            // t is scalar; every vector is an eigenvector
            return {};
        }
        candidates.push_back(v.normalized());
    }
    std::vector<Matrix> out;
    for (const Eigen::Vector2cd& v : candidates) {
        const Eigen::Vector2cd w = t.adjoint() * v;
        const Complex mu = v.dot(w);
        if ((w - mu * v).norm() > 1e-12 * std::max(1.0, norm2x2(t))) continue;
        Matrix p = v * v.adjoint();
        const bool duplicate = std::any_of(out.begin(), out.end(),
                                           [&](const Matrix& q) { return (q - p).norm() < 1e-12; });
        if (!duplicate) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

StarCounterexampleReport strong_star_clean_counterexample(double grid_step) {
    if (!(grid_step > 0.0 && grid_step < 1.0)) {
        throw InputError("strong_star_clean_counterexample: grid step must lie in (0, 1)");
    }
    StarCounterexampleReport report;
    Eigen::Matrix2cd t;
    t << 1.0, 1.0, 0.0, 0.0;
    report.t = t;

    // rank 0 and rank 2 projections commute with everything
    report.symbolic_projections.push_back(Matrix::Zero(2, 2));
    for (Matrix& p : commuting_rank_one(t)) report.symbolic_projections.push_back(std::move(p));
    report.symbolic_projections.push_back(Matrix::Identity(2, 2));

    const double tnorm = norm2x2(t);
    report.grid_step = grid_step;
    // ||[T, P] - [T, Q]|| <= 2||T|| ||P - Q|| <= 4||T|| ||v - w||, and every v is
    // within grid_step / sqrt(2) of a grid point
    report.grid_threshold = 4.0 * tnorm * grid_step / std::sqrt(2.0);
    const auto steps_a = static_cast<Index>(std::ceil((std::numbers::pi / 2) / grid_step));
    const auto steps_b = static_cast<Index>(std::ceil((2 * std::numbers::pi) / grid_step));
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i <= steps_a; ++i) {
        const double alpha = std::min(std::numbers::pi / 2, static_cast<double>(i) * grid_step);
        for (Index j = 0; j < steps_b; ++j) {
            const double beta = static_cast<double>(j) * grid_step;
            Eigen::Vector2cd v(std::cos(alpha), std::polar(std::sin(alpha), beta));
            const Eigen::Matrix2cd p = v * v.adjoint();
            best = std::min(best, norm2x2(t * p - p * t));
            ++report.grid_points;
        }
    }
    report.grid_min_commutator = best;
    report.grid_finds_rank_one = best <= report.grid_threshold;

    report.det_t = std::abs(t.determinant());
    report.det_t_minus_identity = std::abs((t - Eigen::Matrix2cd::Identity()).determinant());

    const bool symbolic_trivial = report.symbolic_projections.size() == 2;
    report.methods_agree = symbolic_trivial == !report.grid_finds_rank_one;
    report.holds = symbolic_trivial && report.methods_agree && report.det_t <= 1e-14 &&
                   report.det_t_minus_identity <= 1e-14;
    report.conclusion = report.holds
                            ? "M2 is not strongly *-clean at this witness: only 0 and I commute with T, "
                              "and T - 0, T - I are both singular"
                            : "witness check failed";
    return report;
}

TruncatedShiftDemo truncated_shift_demo(Index n) {
    if (n < 2 || n % 2 != 0) throw InputError("truncated_shift_demo: n must be even and at least 2");
    Matrix s = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) s(i + 1, i) = 1.0;
    Matrix e = Matrix::Zero(n, n);
    for (Index i = 1; i < n; i += 2) e(i, i) = 1.0;
    const Matrix ce = Matrix::Identity(n, n) - e;
    const Matrix p = e + ce * (s + s.adjoint()) * e;
    TruncatedShiftDemo out;
    out.n = n;
    out.sigma_min = smallest_singular_value(s - p);
    out.p_norm = operator_norm(p);
    return out;
}

SmallFiniteRankResult small_finite_rank_check(const Matrix& t, const Matrix& a, double c,
                                              const OrthoProjection& f) {
    require_square(t, "small_finite_rank_check");
    require_same_size(t, a, "small_finite_rank_check");
    require_finite(t, "small_finite_rank_check");
    require_finite(a, "small_finite_rank_check");
    if (f.dim() != t.rows()) throw InputError("small_finite_rank_check: dimension mismatch");
    const double anorm = operator_norm(a);
    if (!(anorm < c)) throw PreconditionError("small_finite_rank_check: need ||A|| < c");
    const OrthoProjection e = spectral_projection_abs(t, c);
    SmallFiniteRankResult out;
    out.rank_e = e.rank();
    out.rank_f = f.rank();
    out.hypothesis = f.rank() == 0 || operator_norm((t + a) * f.matrix()) < c - anorm;
    out.holds = !out.hypothesis || out.rank_f <= out.rank_e;
    return out;
}

}  // namespace cleandec
