#pragma once

#include <random>

#include <Eigen/QR>

#include "lambda_dem/model.hpp"

namespace lambda_dem {

/// Ginibre sample G G^dagger / tr(G G^dagger): Hermitian, PSD, unit trace,
/// full rank with probability one.
template <typename Rng>
Matrix4cd random_density_matrix(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix4cd g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  Matrix4cd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
template <typename Rng>
Matrix4cd random_unitary(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix4cd g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Matrix4cd> qr(g);
  Matrix4cd q = qr.householderQ();
  const Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 4; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace lambda_dem
