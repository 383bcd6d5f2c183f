#pragma once

// Hand-rolled generators for property tests. Kept apart from the corpus RNG so
// that a bug there cannot hide a bug in the properties.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cleandec/types.hpp"

namespace gen {

using cleandec::Complex;
using cleandec::Index;
using cleandec::Matrix;

class Source {
public:
    explicit Source(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }
    Complex complex() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

    Matrix gaussian(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) m(i, j) = complex();
        return m;
    }

    Matrix unitary(Index n) {
        Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
        return qr.householderQ() * Matrix::Identity(n, n);
    }

    /// Orthonormal basis of a random k-dimensional subspace of C^n.
    Matrix basis(Index n, Index k) { return unitary(n).leftCols(k); }

    Matrix projection(Index n, Index k) {
        const Matrix b = basis(n, k);
        return b * b.adjoint();
    }

    /// U diag(sigma) V^*.
    Matrix with_singular_values(const std::vector<double>& sigma) {
        const Index n = static_cast<Index>(sigma.size());
        Eigen::VectorXd s(n);
        for (Index i = 0; i < n; ++i) s(i) = sigma[static_cast<std::size_t>(i)];
        return unitary(n) * s.cast<Complex>().asDiagonal() * unitary(n).adjoint();
    }

    /// A pair of rank-k projections in C^{2k} in generic position: the
    /// principal angles are drawn from (lo, hi) inside (0, pi/2).
    std::pair<Matrix, Matrix> generic_pair(Index k, double lo = 0.05, double hi = 1.5) {
        const Index n = 2 * k;
        Matrix e_basis = Matrix::Zero(n, k);
        Matrix f_basis = Matrix::Zero(n, k);
        for (Index j = 0; j < k; ++j) {
            const double theta = uniform(lo, hi);
            e_basis(j, j) = 1.0;
            f_basis(j, j) = std::cos(theta);
            f_basis(k + j, j) = std::sin(theta);
        }
        const Matrix u = unitary(n);
        const Matrix e = u * e_basis;
        const Matrix f = u * f_basis;
        return {e * e.adjoint(), f * f.adjoint()};
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gen
