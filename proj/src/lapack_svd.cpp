#include "lapack_svd.hpp"

#include <algorithm>
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "cleandec/errors.hpp"

namespace cleandec::detail {

SvdResult lapack_svd(const Matrix& m, SvdVectors vectors) {
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    const lapack_int k = std::min(rows, cols);
    SvdResult out;
    out.sigma.resize(k);
    if (k == 0) return out;

    char job = 'N';
    lapack_int ucols = 1, vtrows = 1;
    if (vectors == SvdVectors::Thin) {
        job = 'S';
        ucols = k;
        vtrows = k;
    } else if (vectors == SvdVectors::Full) {
        job = 'A';
        ucols = rows;
        vtrows = cols;
    }
    Matrix u(vectors == SvdVectors::None ? 1 : rows, ucols);
    Matrix vt(vectors == SvdVectors::None ? 1 : vtrows, cols);

    Matrix a = m;
    lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, job, rows, cols, a.data(), rows, out.sigma.data(), u.data(),
                                     static_cast<lapack_int>(u.rows()), vt.data(), static_cast<lapack_int>(vt.rows()));
    if (info > 0) {
        // divide and conquer did not converge; QR iteration is slower but sturdier
        a = m;
        RealVector superb(std::max<lapack_int>(k - 1, 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, rows, cols, a.data(), rows, out.sigma.data(), u.data(),
                              static_cast<lapack_int>(u.rows()), vt.data(), static_cast<lapack_int>(vt.rows()),
                              superb.data());
    }
    if (info != 0) throw NumericalFailure("singular value decomposition did not converge");
    if (vectors != SvdVectors::None) {
        out.u = std::move(u);
        out.v = vt.adjoint();
    }
    return out;
}

Eigen::VectorXd lapack_singular_values(const Eigen::MatrixXd& m) {
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    Eigen::VectorXd sigma(std::min(rows, cols));
    if (sigma.size() == 0) return sigma;
    Eigen::MatrixXd a = m;
    double dummy = 0.0;
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, sigma.data(), &dummy, 1, &dummy, 1);
    if (info != 0) throw NumericalFailure("singular value decomposition did not converge");
    return sigma;
}

}  // namespace cleandec::detail
