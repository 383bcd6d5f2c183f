#include <doctest.h>

#include <cmath>
#include <limits>

#include "cleandec/errors.hpp"
#include "cleandec/matcore.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cleandec;

namespace {

Matrix unit(Index n, Index i, Index j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

Matrix diag(std::initializer_list<double> d) {
    Eigen::VectorXd v(static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d) v(i++) = x;
    return v.cast<Complex>().asDiagonal();
}

double dist(const Matrix& a, const Matrix& b) { return oracle::norm(a - b); }

}  // namespace

TEST_CASE("operator_norm basics") {
    CHECK(operator_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(operator_norm(Matrix::Zero(4, 4)) == 0.0);
    CHECK(operator_norm(diag({3, 1})) == doctest::Approx(3.0).epsilon(1e-15));
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(operator_norm(bad), InputError);
}

TEST_CASE("operator_norm agrees with the Hermitian eigen oracle") {
    gen::Source src(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = src.integer(1, 24);
        const Matrix m = src.gaussian(n, n);
        CHECK(std::abs(operator_norm(m) - oracle::norm(m)) <= 1e-12 * oracle::norm(m));
        CHECK(std::abs(smallest_singular_value(m) - oracle::sigma_min(m)) <= 1e-8 * oracle::sigma_min(m) + 1e-13);
    }
}

TEST_CASE("kernel and range projections") {
    const Index n = 4;
    CHECK(dist(kernel_projection(Matrix::Zero(n, n)).matrix(), Matrix::Identity(n, n)) < 1e-14);
    CHECK(kernel_projection(Matrix::Identity(n, n)).rank() == 0);
    CHECK(dist(range_projection(Matrix::Identity(n, n)).matrix(), Matrix::Identity(n, n)) < 1e-14);
    CHECK(range_projection(Matrix::Zero(n, n)).rank() == 0);

    const Matrix e12 = unit(2, 0, 1);
    const OrthoProjection k = kernel_projection(e12);
    CHECK(k.rank() == 1);
    CHECK(dist(k.matrix(), unit(2, 0, 0)) < 1e-14);
    const OrthoProjection r = range_projection(e12);
    CHECK(r.rank() == 1);
    CHECK(dist(r.matrix(), unit(2, 0, 0)) < 1e-14);
}

TEST_CASE("property: rank-nullity and R(M) = I - K(M^*)") {
    gen::Source src(12);
    for (int trial = 0; trial < 300; ++trial) {
        const Index n = src.integer(1, 16);
        const Index r = src.integer(0, n);
        const Matrix m = src.gaussian(n, r) * src.gaussian(r, n);
        const OrthoProjection k = kernel_projection(m);
        const OrthoProjection rg = range_projection(m);
        CHECK(k.rank() + rg.rank() == n);
        CHECK(rg.rank() == r);
        const Matrix dual = Matrix::Identity(n, n) - kernel_projection(m.adjoint()).matrix();
        CHECK(dist(rg.matrix(), dual) < 1e-9);
        CHECK(k.idempotent_residual() <= 1e-10);
        CHECK(k.selfadjoint_residual() <= 1e-10);
        CHECK(oracle::norm(m * k.matrix()) <= 1e-10 * std::max(1.0, oracle::norm(m)));
    }
}

TEST_CASE("meet and join examples") {
    gen::Source src(13);
    const OrthoProjection f = OrthoProjection::from_matrix(src.projection(4, 2));
    const OrthoProjection e = OrthoProjection::from_matrix(src.projection(4, 1));
    CHECK(dist(meet(OrthoProjection::identity(4), f).matrix(), f.matrix()) < 1e-10);
    CHECK(meet(e, OrthoProjection::zero(4)).rank() == 0);
    CHECK(dist(join(e, OrthoProjection::zero(4)).matrix(), e.matrix()) < 1e-10);
    CHECK(dist(join(e, e.complement()).matrix(), Matrix::Identity(4, 4)) < 1e-10);

    Matrix v(2, 1), w(2, 1);
    v << 1.0, 0.0;
    w << std::cos(0.3), std::sin(0.3);
    CHECK(meet(OrthoProjection::from_basis(v), OrthoProjection::from_basis(w)).rank() == 0);

    Matrix a(3, 1), b(3, 1);
    a << 1.0, 0.0, 0.0;
    b << Complex(0.6, 0.0), Complex(0.0, 0.8), 0.0;
    const OrthoProjection j = join(OrthoProjection::from_basis(a), OrthoProjection::from_basis(b));
    CHECK(j.rank() == 2);
    CHECK(dist(j.matrix(), unit(3, 0, 0) + unit(3, 1, 1)) < 1e-12);
}

TEST_CASE("property: meet matches the (E+F)/2 eigen oracle and De Morgan holds") {
    gen::Source src(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const Index n = src.integer(2, 10);
        // plant a shared subspace so the meet is often nontrivial
        const Index shared = src.integer(0, n / 2);
        const Matrix common = src.basis(n, shared);
        auto extend = [&](Index extra) {
            Matrix b(n, shared + extra);
            b << common, src.gaussian(n, extra);
            return OrthoProjection::from_matrix(range_projection(b).matrix());
        };
        const OrthoProjection e = extend(src.integer(0, n - shared));
        const OrthoProjection f = extend(src.integer(0, n - shared));
        const OrthoProjection m = meet(e, f);
        const Matrix oracle_meet = oracle::meet_projection(e.matrix(), f.matrix());
        CHECK(dist(m.matrix(), oracle_meet) < 1e-7);
        const Matrix morgan = Matrix::Identity(n, n) - meet(e.complement(), f.complement()).matrix();
        CHECK(dist(join(e, f).matrix(), morgan) < 1e-8);
    }
}

TEST_CASE("spectral_projection_abs") {
    const OrthoProjection e = spectral_projection_abs(diag({0.1, 2.0}), 0.5);
    CHECK(dist(e.matrix(), diag({1, 0})) < 1e-14);
    CHECK(spectral_projection_abs(diag({0.1, 2.0}), 3.0).rank() == 2);
    CHECK_THROWS_AS(spectral_projection_abs(diag({0.5, 2.0}), 0.5), AmbiguousCut);

    gen::Source src(15);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> sigma;
        const Index n = src.integer(1, 12);
        for (Index i = 0; i < n; ++i) sigma.push_back(src.uniform(0.0, 2.0));
        const Matrix t = src.with_singular_values(sigma);
        std::vector<double> sorted = sigma;
        std::sort(sorted.begin(), sorted.end());
        // cut at the midpoint of the widest gap
        double c = sorted.back() + 0.5;
        double gap = 0.0;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            if (sorted[i + 1] - sorted[i] > gap) {
                gap = sorted[i + 1] - sorted[i];
                c = (sorted[i] + sorted[i + 1]) / 2.0;
            }
        }
        const OrthoProjection p = spectral_projection_abs(t, c);
        const auto expected = std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s <= c; });
        CHECK(p.rank() == expected);
        CHECK(oracle::norm(t * p.matrix()) <= c + 1e-10);
        if (p.rank() < n) CHECK(bounded_below_constant(t, p.complement()) >= c - 1e-10);
    }
}

TEST_CASE("compare_projections and bounded_below_constant") {
    gen::Source src(16);
    const OrthoProjection one = OrthoProjection::from_matrix(src.projection(3, 1));
    const OrthoProjection two = OrthoProjection::from_matrix(src.projection(3, 2));
    CHECK(compare_projections(one, two) == ProjectionOrder::FirstBelow);
    CHECK(compare_projections(two, one) == ProjectionOrder::SecondBelow);
    CHECK(compare_projections(one, one) == ProjectionOrder::Equivalent);

    CHECK(bounded_below_constant(src.unitary(4), OrthoProjection::from_matrix(src.projection(4, 2))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bounded_below_constant(Matrix::Zero(3, 3), one) == 0.0);
    CHECK(std::isinf(bounded_below_constant(Matrix::Identity(3, 3), OrthoProjection::zero(3))));
    CHECK(bounded_below_constant(diag({0.1, 2.0}), OrthoProjection::from_matrix(diag({0, 1}))) ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("property: meet(F, I - E) = 0 implies rank F <= rank E") {
    gen::Source src(17);
    int tested = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Index n = src.integer(1, 8);
        const OrthoProjection e = OrthoProjection::from_matrix(src.projection(n, src.integer(0, n)));
        OrthoProjection f;
        if (trial % 2 == 0) {
            f = OrthoProjection::from_matrix(src.projection(n, src.integer(0, n)));
        } else {
            // prescribed principal angles to range(E): tilt a subset of E's basis
            const Index k = src.integer(0, e.rank());
            Matrix b = e.basis().leftCols(k);
            const Index room = std::min(k, n - e.rank());
            for (Index j = 0; j < room; ++j) {
                const double theta = src.uniform(0.01, 1.5);
                b.col(j) = std::cos(theta) * b.col(j) + std::sin(theta) * e.complement_basis().col(j);
            }
            f = OrthoProjection::from_basis(b);
        }
        if (meet(f, e.complement()).rank() == 0) {
            ++tested;
            CHECK(compare_projections(f, e) != ProjectionOrder::SecondBelow);
            CHECK(oracle::projection_rank(f.matrix()) <= oracle::projection_rank(e.matrix()));
        }
    }
    CHECK(tested > 300);
}

TEST_CASE("projections built from matrices are re-idempotized") {
    gen::Source src(18);
    Matrix p = src.projection(6, 3);
    p += 1e-11 * src.gaussian(6, 6);
    const OrthoProjection q = OrthoProjection::from_matrix(p);
    CHECK(q.rank() == 3);
    CHECK(q.idempotent_residual() <= 1e-13);
    CHECK(q.selfadjoint_residual() <= 1e-13);
    CHECK_THROWS_AS(OrthoProjection::from_matrix(src.gaussian(3, 3)), InputError);
}
