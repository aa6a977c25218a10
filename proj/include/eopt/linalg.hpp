#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace eopt {

using Matrix = Eigen::MatrixXd;

/// Identifier of the matrix norm behind every log-norm in this library.
inline constexpr std::string_view kNormTag = "spectral";

/// Largest singular value. 2x2 uses the closed form; larger sizes use
/// two-sided Jacobi SVD.
double op_norm(const Matrix& m);

/// Largest eigenvalue modulus. Throws DimensionTooLarge when d > 8.
///
/// d <= 2 solves the characteristic polynomial directly; larger sizes read
/// the eigenvalues off a real Schur form, which keeps repeated eigenvalues
/// (identity blocks, for instance) exact where polynomial root finding
/// would lose half the digits.
double spectral_radius(const Matrix& m);

inline constexpr int kMaxSpectralDimension = 8;

}  // namespace eopt
