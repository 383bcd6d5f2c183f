#include <doctest.h>

#include <cmath>

#include "cleandec/errors.hpp"
#include "cleandec/witness.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cleandec;

TEST_CASE("shift_matrix") {
    CHECK(shift_matrix(1) == Matrix::Zero(1, 1));
    Matrix two = Matrix::Zero(2, 2);
    two(0, 1) = 1.0;
    CHECK(shift_matrix(2) == two);
    CHECK_THROWS_AS(shift_matrix(0), InputError);
}

TEST_CASE("shift lower-bound table against the power-iteration oracle") {
    const WitnessTable table = shift_inverse_lowerbound_table(64);
    REQUIRE(table.rows.size() == 64);
    CHECK(table.all_pass());
    CHECK(table.rows[0].measured == doctest::Approx(1.0));
    CHECK(table.rows[0].reference == 1.0);
    CHECK(table.rows[3].measured == doctest::Approx(2.879).epsilon(1e-3));
    for (Index n : {1, 2, 4, 7, 16, 33, 64}) {
        // (I - V)^{-1} = I + V + ... + V^{n-1}: all-ones upper triangle
        Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = i; j < n; ++j) inv(i, j) = 1.0;
        const double expected = oracle::power_norm(inv);
        const WitnessRow& row = table.rows[static_cast<std::size_t>(n - 1)];
        CHECK(row.n == n);
        CHECK(std::abs(row.measured - expected) <= 1e-9 * expected);
        CHECK(row.measured >= std::sqrt(double(n)) - 1e-9);
    }
    CHECK_THROWS_AS(shift_inverse_lowerbound_table(0), InputError);
}

TEST_CASE("M2 strongly *-clean witness") {
    const StarCounterexampleReport r = strong_star_clean_counterexample();
    CHECK(r.holds);
    CHECK(r.methods_agree);
    CHECK_FALSE(r.grid_finds_rank_one);
    REQUIRE(r.symbolic_projections.size() == 2);
    CHECK(oracle::norm(r.symbolic_projections[0]) == 0.0);
    CHECK(r.symbolic_projections[1] == Matrix::Identity(2, 2));
    CHECK(r.det_t == 0.0);
    CHECK(r.det_t_minus_identity == 0.0);
    CHECK(r.grid_min_commutator > r.grid_threshold);

    // brute force: every rank-one projection v v^* misses the commutant
    double best = 1.0;
    for (int i = 0; i <= 200; ++i) {
        const double a = 1.5707963267948966 * i / 200.0;
        for (int j = 0; j < 400; ++j) {
            Eigen::Vector2cd v(std::cos(a), std::polar(std::sin(a), 6.283185307179586 * j / 400.0));
            const Matrix p = v * v.adjoint();
            best = std::min(best, oracle::norm(r.t * p - p * r.t));
        }
    }
    CHECK(best > 0.4);

    CHECK_THROWS_AS(strong_star_clean_counterexample(0.0), InputError);
}

TEST_CASE("truncated_shift_demo") {
    for (Index n : {2, 4}) {
        const TruncatedShiftDemo d = truncated_shift_demo(n);
        Matrix s = Matrix::Zero(n, n);
        for (Index i = 0; i + 1 < n; ++i) s(i + 1, i) = 1.0;
        Matrix e = Matrix::Zero(n, n);
        for (Index i = 1; i < n; i += 2) e(i, i) = 1.0;
        const Matrix ce = Matrix::Identity(n, n) - e;
        const Matrix p = e + ce * (s + s.adjoint()) * e;
        CHECK(oracle::norm(p * p - p) < 1e-14);
        CHECK(d.sigma_min > 0.0);
        CHECK(std::abs(d.sigma_min - oracle::sigma_min(s - p)) <= 1e-12);
        CHECK(std::abs(d.p_norm - oracle::norm(p)) <= 1e-12);
    }
    CHECK_THROWS_AS(truncated_shift_demo(3), InputError);
    CHECK_THROWS_AS(truncated_shift_demo(0), InputError);
}

TEST_CASE("small_finite_rank_check") {
    gen::Source src(51);
    const Matrix t = src.gaussian(5, 5);
    const OrthoProjection e = spectral_projection_abs(t, 0.9);
    const SmallFiniteRankResult same = small_finite_rank_check(t, Matrix::Zero(5, 5), 0.9, e);
    CHECK(same.rank_e == e.rank());
    CHECK(same.holds);
    const SmallFiniteRankResult zero = small_finite_rank_check(t, Matrix::Zero(5, 5), 0.9, OrthoProjection::zero(5));
    CHECK(zero.hypothesis);
    CHECK(zero.holds);
    CHECK_THROWS_AS(small_finite_rank_check(t, Matrix::Identity(5, 5), 0.9, e), PreconditionError);
}

TEST_CASE("property: no rank violation on rejection-sampled instances") {
    gen::Source src(52);
    const Index n = 8;
    int satisfied = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        // a block of small singular values makes the hypothesis fire often
        const Index small = src.integer(0, 4);
        std::vector<double> sigma;
        for (Index i = 0; i < n; ++i) sigma.push_back(i < small ? src.uniform(0.0, 0.3) : src.uniform(0.0, 3.0));
        const Matrix u = src.unitary(n);
        const Matrix v = src.unitary(n);
        Eigen::VectorXd s(n);
        for (Index i = 0; i < n; ++i) s(i) = sigma[static_cast<std::size_t>(i)];
        const Matrix t = u * s.cast<Complex>().asDiagonal() * v.adjoint();
        Matrix a = src.gaussian(n, n);
        a *= 0.3 / oracle::norm(a);
        Matrix f_basis;
        if (trial % 2 == 0) {
            f_basis = v.leftCols(src.integer(0, small));
        } else {
            f_basis = src.basis(n, src.integer(0, 3));
        }
        const OrthoProjection f = OrthoProjection::from_basis(f_basis);
        const SmallFiniteRankResult r = small_finite_rank_check(t, a, 1.0, f);
        if (r.hypothesis && f.rank() > 0) ++satisfied;
        CHECK(r.holds);
        if (r.hypothesis) CHECK(f.rank() <= r.rank_e);
    }
    CHECK(satisfied > 1000);
}
