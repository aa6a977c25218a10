#include "eopt/linalg.hpp"

#include "eopt/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace eopt {

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2 && m.cols() == 2) {
    const double a = m(0, 0);
    const double b = m(0, 1);
    const double c = m(1, 0);
    const double d = m(1, 1);
    // sigma_max = (|z1| + |z2|) / 2 with z1 = (a+d, c-b), z2 = (a-d, b+c).
    return 0.5 * (std::hypot(a + d, c - b) + std::hypot(a - d, b + c));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "spectral radius of a non-square matrix");
  }
  const auto d = m.rows();
  if (d > kMaxSpectralDimension) {
    throw Error(ErrorCode::DimensionTooLarge, "spectral radius supports d <= 8");
  }
  if (d == 0) return 0.0;
  if (d == 1) return std::abs(m(0, 0));
  if (d == 2) {
    // lambda^2 - t lambda + det = 0.
    const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    // Discriminant as ((a-d)/2)^2 + bc avoids cancelling t^2/4 against det.
    const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const double disc = half_diff * half_diff + m(0, 1) * m(1, 0);
    if (disc < 0.0) {
      return std::sqrt(std::abs(det));
    }
    return std::abs(half_trace) + std::sqrt(disc);
  }
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace eopt
