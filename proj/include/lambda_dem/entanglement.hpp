#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lambda_dem/model.hpp"

namespace lambda_dem {

/// Eigenvalues of a 4x4 Hermitian matrix, descending.
template <typename Scalar = double>
struct Spectrum4 {
  std::array<Scalar, 4> lambda{};

  Scalar min() const { return lambda[3]; }
  Scalar max() const { return lambda[0]; }
  Scalar sum() const { return lambda[0] + lambda[1] + lambda[2] + lambda[3]; }
};

/// max |m_ij - conj(m_ji)|
template <typename Scalar>
Scalar hermiticity_residual(const Matrix4c<Scalar>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar off_diagonal_norm(const Matrix4c<Scalar>& a) {
  Scalar s = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

/// Cyclic complex Jacobi. Each (p, q) rotation first rotates the phase of
/// a_pq away, then applies the classical real Jacobi rotation that zeroes
/// it. Stops when the off-diagonal Frobenius norm is below 1e-14 (relative
/// to the matrix norm once that exceeds one).
template <typename Scalar = double>
Spectrum4<Scalar> eigvals_hermitian4(const Matrix4c<Scalar>& m,
                                     Scalar hermitian_tol = Scalar(1e-10)) {
  using C = std::complex<Scalar>;
  if (!(hermiticity_residual(m) < hermitian_tol)) {
    throw NonHermitianError("eigvals_hermitian4: input is not Hermitian");
  }
  Matrix4c<Scalar> a = (m + m.adjoint()) / Scalar(2);
  const Scalar scale = std::max(Scalar(1), std::sqrt(a.squaredNorm()));
  const Scalar tol = Scalar(1e-14) * scale;

  for (int sweep = 0; sweep < 64 && off_diagonal_norm(a) >= tol; ++sweep) {
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const Scalar apq = std::abs(a(p, q));
        if (apq == Scalar(0)) continue;
        const C phase = a(p, q) / apq;  // e^{i theta}
        const Scalar app = a(p, p).real();
        const Scalar aqq = a(q, q).real();
        const Scalar theta = (aqq - app) / (Scalar(2) * apq);
        const Scalar t =
            (theta >= 0 ? Scalar(1) : Scalar(-1)) /
            (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        // J = diag(1, .., e^{-i theta} at q, ..) * R(c, s); a <- J^H a J.
        // Only rows/columns p and q change.
        const C sp = s * phase;  // J(p, q)
        for (int k = 0; k < 4; ++k) {
          const C akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - std::conj(sp) * akq;
          a(k, q) = sp * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const C apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sp * aqk;
          a(q, k) = std::conj(sp) * apk + c * aqk;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(a(p, p).real());
        a(q, q) = C(a(q, q).real());
      }
    }
  }

  Spectrum4<Scalar> spec;
  for (int k = 0; k < 4; ++k) spec.lambda[k] = a(k, k).real();
  std::sort(spec.lambda.begin(), spec.lambda.end(), std::greater<Scalar>());
  return spec;
}

Spectrum4<double> eigvals(const DensityMatrix& rho);

/// Eigenvalues below this are a positivity violation rather than roundoff.
inline constexpr double kPositivityTolerance = 1e-8;

/// -sum lambda ln lambda in nats over a checked, clamped spectrum.
double entropy_of(const Spectrum4<double>& spec);

/// Degree of entanglement: von Neumann entropy of the atomic state (nats).
double dem(const DensityMatrix& rho);
double dem(const Matrix4cd& rho);

struct DemSample {
  double t;
  double dem;
};

using DemSeries = std::vector<DemSample>;

struct Trajectory;

DemSeries dem_series(const Trajectory& traj);

}  // namespace lambda_dem
