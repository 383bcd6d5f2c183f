#pragma once

#include "cleandec/types.hpp"

namespace cleandec::detail {

enum class SvdVectors { None, Thin, Full };

struct SvdResult {
    RealVector sigma;  // descending
    Matrix u;
    Matrix v;
};

/// LAPACK divide-and-conquer SVD (zgesdd), falling back to zgesvd.
SvdResult lapack_svd(const Matrix& m, SvdVectors vectors);

/// Singular values of a real matrix (dgesdd).
Eigen::VectorXd lapack_singular_values(const Eigen::MatrixXd& m);

}  // namespace cleandec::detail
