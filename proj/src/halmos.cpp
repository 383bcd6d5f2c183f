#include "cleandec/halmos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cleandec/errors.hpp"
#include "lapack_svd.hpp"

namespace cleandec {

namespace {

Matrix hstack(std::initializer_list<const Matrix*> blocks, Index rows) {
    Index cols = 0;
    for (const Matrix* b : blocks) cols += b->cols();
    Matrix out(rows, cols);
    Index at = 0;
    for (const Matrix* b : blocks) {
        out.middleCols(at, b->cols()) = *b;
        at += b->cols();
    }
    return out;
}

// Orthonormal basis of the part of range(basis) orthogonal to `known`, where
// `known` is expected to lie in range(basis) with orthonormal columns.
Matrix complement_within(const Matrix& basis, const Matrix& known, const char* what) {
    const Index k = basis.cols();
    const Index m = known.cols();
    if (m > k) throw AmbiguousSplit(std::string("halmos_form: too many vectors in ") + what);
    if (m == 0) return basis;
    const Matrix coords = basis.adjoint() * known;
    const detail::SvdResult svd = detail::lapack_svd(coords, detail::SvdVectors::Full);
    const RealVector& s = svd.sigma;
    if (s(m - 1) < 0.5 || std::abs(s(0) - 1.0) > 0.5) {
        throw AmbiguousSplit(std::string("halmos_form: inconsistent subspace in ") + what);
    }
    return basis * svd.u.rightCols(k - m);
}

// W (W^* W)^{-1/2}, the nearest matrix with orthonormal columns.
Matrix nearest_orthonormal(const Matrix& w) {
    if (w.cols() == 0) return w;
    const detail::SvdResult svd = detail::lapack_svd(w, detail::SvdVectors::Thin);
    return svd.u * svd.v.adjoint();
}

}  // namespace

Matrix HalmosForm::canonical_e() const {
    const Index size = n();
    Matrix out = Matrix::Zero(size, size);
    for (Index i = 0; i < d1 + d2; ++i) out(i, i) = 1.0;
    const Index ge = d1 + 2 * d2;
    for (Index j = 0; j < d3; ++j) out(ge + j, ge + j) = 1.0;
    if (extra_in_e) {
        for (Index i = size - d_extra; i < size; ++i) out(i, i) = 1.0;
    }
    return out;
}

Matrix HalmosForm::canonical_f() const {
    const Index size = n();
    Matrix out = Matrix::Zero(size, size);
    for (Index i = 0; i < d1; ++i) out(i, i) = 1.0;
    for (Index i = d1 + d2; i < d1 + 2 * d2; ++i) out(i, i) = 1.0;
    const Index ge = d1 + 2 * d2;
    const Index gf = ge + d3;
    for (Index j = 0; j < d3; ++j) {
        const double hj = h(j);
        const double off = std::sqrt(hj * (1.0 - hj));
        out(ge + j, ge + j) = hj;
        out(ge + j, gf + j) = off;
        out(gf + j, ge + j) = off;
        out(gf + j, gf + j) = 1.0 - hj;
    }
    if (!extra_in_e) {
        for (Index i = size - d_extra; i < size; ++i) out(i, i) = 1.0;
    }
    return out;
}

HalmosForm halmos_form(const OrthoProjection& e, const OrthoProjection& f, double delta) {
    if (e.dim() != f.dim()) throw InputError("halmos_form: dimension mismatch");
    if (!(delta > 0.0 && delta < 0.5)) throw InputError("halmos_form: delta must lie in (0, 1/2)");
    const Index n = e.dim();
    const Matrix& be = e.basis();
    const Index k = be.cols();

    // compression of F to range(E)
    Matrix ef_e(n, 0), ef_perp(n, 0), ge(n, 0);
    std::vector<double> hs;
    if (k > 0) {
        const Matrix compression = be.adjoint() * f.matrix() * be;
        Eigen::SelfAdjointEigenSolver<Matrix> eig((compression + compression.adjoint()) / 2.0);
        const RealVector& lambda = eig.eigenvalues();
        const Matrix vecs = be * eig.eigenvectors();
        std::vector<Index> top, bottom, mid;
        for (Index i = 0; i < k; ++i) {
            const double l = lambda(i);
            if (std::abs(l - delta) <= delta / 2 || std::abs(l - (1.0 - delta)) <= delta / 2) {
                throw AmbiguousSplit("halmos_form: compression eigenvalue " + std::to_string(l) +
                                     " at the splitting threshold");
            }
            if (l >= 1.0 - delta) {
                top.push_back(i);
            } else if (l <= delta) {
                bottom.push_back(i);
            } else {
                mid.push_back(i);
                hs.push_back(l);
            }
        }
        auto take = [&](const std::vector<Index>& idx) {
            Matrix out(n, static_cast<Index>(idx.size()));
            for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Index>(j)) = vecs.col(idx[j]);
            return out;
        };
        ef_e = take(top);
        ef_perp = take(bottom);
        ge = take(mid);
    }
    normalize_column_phases(ef_e);
    normalize_column_phases(ef_perp);
    normalize_column_phases(ge);

    const Index d3 = ge.cols();
    RealVector h(d3);
    for (Index j = 0; j < d3; ++j) h(j) = hs[static_cast<std::size_t>(j)];

    const Matrix complement_e = Matrix::Identity(n, n) - e.matrix();
    Matrix gf(n, d3);
    Matrix g_in_f(n, d3);
    for (Index j = 0; j < d3; ++j) {
        const double hj = h(j);
        gf.col(j) = complement_e * (f.matrix() * ge.col(j)) / std::sqrt(hj * (1.0 - hj));
    }
    gf = nearest_orthonormal(gf);
    for (Index j = 0; j < d3; ++j) {
        g_in_f.col(j) = std::sqrt(h(j)) * ge.col(j) + std::sqrt(1.0 - h(j)) * gf.col(j);
    }

    // (I-E)∧F: the rest of range(F)
    const Matrix known_f = hstack({&ef_e, &g_in_f}, n);
    Matrix perp_e_f = complement_within(f.basis(), known_f, "range(F)");
    if (perp_e_f.cols() > 0 && operator_norm(e.matrix() * perp_e_f) > std::sqrt(delta)) {
        throw AmbiguousSplit("halmos_form: (I-E)∧F does not lie in range(I-E)");
    }
    normalize_column_phases(perp_e_f);

    // (I-E)∧(I-F): the rest of range(I-E)
    const Matrix known_ce = hstack({&gf, &perp_e_f}, n);
    Matrix perp_both = complement_within(e.complement_basis(), known_ce, "range(I-E)");
    if (perp_both.cols() > 0 && operator_norm(f.matrix() * perp_both) > std::sqrt(delta)) {
        throw AmbiguousSplit("halmos_form: (I-E)∧(I-F) does not lie in range(I-F)");
    }
    normalize_column_phases(perp_both);

    HalmosForm out;
    out.delta = delta;
    out.d1 = ef_e.cols();
    const Index a = ef_perp.cols();
    const Index b = perp_e_f.cols();
    out.d2 = std::min(a, b);
    out.d3 = d3;
    out.d4 = perp_both.cols();
    out.d_extra = std::abs(a - b);
    out.extra_in_e = a >= b;
    out.h = h;

    const Matrix pe = ef_perp.leftCols(out.d2);
    const Matrix pf = perp_e_f.leftCols(out.d2);
    const Matrix extras = a >= b ? Matrix(ef_perp.rightCols(a - out.d2)) : Matrix(perp_e_f.rightCols(b - out.d2));
    Matrix w = hstack({&ef_e, &pe, &pf, &ge, &gf, &perp_both, &extras}, n);
    if (w.cols() != n) throw AmbiguousSplit("halmos_form: block dimensions do not add up to n");

    // remove the accumulated loss of orthogonality without moving the blocks
    out.w = nearest_orthonormal(w);
    out.residual_unitary = operator_norm(out.w.adjoint() * out.w - Matrix::Identity(n, n));
    out.residual_e = operator_norm(out.w * out.canonical_e() * out.w.adjoint() - e.matrix());
    out.residual_f = operator_norm(out.w * out.canonical_f() * out.w.adjoint() - f.matrix());
    return out;
}

DifferenceInvertibility difference_invertibility(const OrthoProjection& e, const OrthoProjection& f) {
    if (e.dim() != f.dim()) throw InputError("difference_invertibility: dimension mismatch");
    DifferenceInvertibility out;
    out.ef_norm = (e.rank() == 0 || f.rank() == 0)
                      ? 0.0
                      : std::min(1.0, operator_norm(e.basis().adjoint() * f.basis()));

    const OrthoProjection j = join(e, f);
    if (j.rank() == 0) {
        out.invertible_on_join = true;
        out.norm_of_inverse = 1.0;
        out.formula_norm = 1.0;
        out.identity_ok = true;
        return out;
    }
    const Matrix restricted = j.basis().adjoint() * (e.matrix() - f.matrix()) * j.basis();
    const double smin = smallest_singular_value(restricted);
    out.invertible_on_join = smin > kConstructionTol;
    if (!out.invertible_on_join) return out;
    out.norm_of_inverse = 1.0 / smin;

    if (f.rank() == 0) {
        out.formula_norm = 1.0;
    } else {
        const Matrix away = f.basis() - e.basis() * (e.basis().adjoint() * f.basis());
        out.formula_norm = 1.0 / std::min(1.0, smallest_singular_value(away));
    }
    out.identity_ok = std::abs(*out.norm_of_inverse - *out.formula_norm) <= 1e-8 * *out.norm_of_inverse;
    return out;
}

Idempotent graph_idempotent(const Matrix& t, const OrthoProjection& e, const Matrix& a) {
    require_square(t, "graph_idempotent");
    require_finite(t, "graph_idempotent");
    require_finite(a, "graph_idempotent");
    if (t.rows() != e.dim() || a.rows() != e.dim() || a.cols() != e.dim()) {
        throw InputError("graph_idempotent: dimension mismatch");
    }
    const Index n = t.rows();
    const Matrix& em = e.matrix();
    const Matrix ce = Matrix::Identity(n, n) - em;
    if (e.rank() > 0) {
        const Matrix restricted = e.basis().adjoint() * t * e.basis() - Matrix::Identity(e.rank(), e.rank());
        if (!(smallest_singular_value(restricted) > kConstructionTol)) {
            throw PreconditionError("graph_idempotent: ETE - E is not invertible on range(E)");
        }
    }
    const Matrix a_supported = ce * a * em;
    const Matrix ete_minus_e = em * t * em - em;
    Matrix p = em + ce * t * em - a_supported * ete_minus_e;
    const double scale = std::max(1.0, operator_norm(p));
    return Idempotent(std::move(p), 1e-8 * scale);
}

SumInvertibility sum_invertibility_check(const Matrix& t, const OrthoProjection& e, double tol) {
    require_square(t, "sum_invertibility_check");
    require_finite(t, "sum_invertibility_check");
    if (t.rows() != e.dim()) throw InputError("sum_invertibility_check: dimension mismatch");
    const Index n = t.rows();
    const OrthoProjection ce = e.complement();
    SumInvertibility out;
    out.a1 = bounded_below_constant(t, e);
    out.a2 = bounded_below_constant(t, ce);

    const double tnorm = operator_norm(t);
    const bool injective_parts = out.a1 > tol * tnorm && out.a2 > tol * tnorm;
    if (injective_parts) {
        // T is injective on both pieces, so its ranges have the ranks of E and I - E
        const Matrix te = t * e.basis();
        const Matrix tc = t * ce.basis();
        auto orth = [n](const Matrix& m) {
            if (m.cols() == 0) return OrthoProjection::zero(n);
            Eigen::HouseholderQR<Matrix> qr(m);
            Matrix q = qr.householderQ() * Matrix::Identity(n, m.cols());
            return OrthoProjection::from_basis(q);
        };
        const RangeCoupling rc = range_coupling(orth(te), orth(tc));
        out.coupling = rc.coupling;
        out.one_minus_coupling = rc.one_minus;
    } else {
        const RangeCoupling rc = range_coupling(range_projection(t * e.matrix()), range_projection(t * ce.matrix()));
        out.coupling = rc.coupling;
        out.one_minus_coupling = rc.one_minus;
    }
    // decide on the sine of the smallest angle; 1 - cos is its square and would need tol^2
    out.invertible = injective_parts && std::sqrt(out.one_minus_coupling * (1.0 + out.coupling)) > tol;
    if (!out.invertible) return out;

    const double smin = smallest_singular_value(t);
    out.inverse_norm = 1.0 / smin;
    const double middle = std::sqrt(out.one_minus_coupling) * *out.inverse_norm;
    const double lower = 1.0 / tnorm;
    const double upper = 1.0 / std::min(out.a1, out.a2);
    out.sandwich_ok = lower <= middle * (1.0 + 1e-8) && middle <= upper * (1.0 + 1e-8);
    return out;
}

ConjugateDuality conjugate_duality_check(const Matrix& t, const Idempotent& e, double a, double c, double tol) {
    require_square(t, "conjugate_duality_check");
    require_finite(t, "conjugate_duality_check");
    if (t.rows() != e.matrix().rows()) throw InputError("conjugate_duality_check: dimension mismatch");
    const Index n = t.rows();
    const Matrix ce = Matrix::Identity(n, n) - e.matrix();
    if (operator_norm(t * e.matrix()) > a * (1.0 + tol) + tol) {
        throw PreconditionError("conjugate_duality_check: ||TE|| exceeds a");
    }
    const OrthoProjection kernel_e = range_projection(ce);
    if (bounded_below_constant(t, kernel_e) < c * (1.0 - tol)) {
        throw PreconditionError("conjugate_duality_check: T is not bounded below by c on ker(E)");
    }
    ConjugateDuality out;
    // with T injective on ker(E), R(T(I-E)) is spanned by T applied to a basis of ker(E)
    Matrix image = t * kernel_e.basis();
    OrthoProjection r = OrthoProjection::zero(n);
    if (!(bounded_below_constant(t, kernel_e) > 1e-12 * std::max(1.0, operator_norm(t)))) {
        r = range_projection(t * ce);
    } else if (image.cols() > 0) {
        Eigen::HouseholderQR<Matrix> qr(image);
        r = OrthoProjection::from_basis(qr.householderQ() * Matrix::Identity(n, image.cols()));
    }
    out.f = r.complement();
    out.t_star_f_norm = operator_norm(t.adjoint() * out.f.matrix());
    out.lower_constant = bounded_below_constant(t.adjoint(), r);
    out.dual_ok = out.t_star_f_norm <= a * (1.0 + tol) + tol && out.lower_constant >= c * (1.0 - tol);
    return out;
}

}  // namespace cleandec
