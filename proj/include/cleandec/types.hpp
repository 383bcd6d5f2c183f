#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace cleandec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Tolerance used while constructing lattice operations, Halmos forms and spectral cuts.
inline constexpr double kConstructionTol = 1e-10;

/// Relative slack allowed when a certificate is checked against a claimed bound.
inline constexpr double kCertificationSlack = 1e-6;

void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);
void require_same_size(const Matrix& a, const Matrix& b, std::string_view what);

}  // namespace cleandec
