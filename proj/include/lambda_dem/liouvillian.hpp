#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "lambda_dem/model.hpp"

namespace lambda_dem {

/// Which right-hand side drives an integration.
///  - Literal: the nine reference rate equations, term for term.
///  - Derived: -i[H, rho] plus the emission/damping dissipator.
enum class RhsMode { Literal, Derived };

std::string_view to_string(RhsMode mode);

/// Instantaneous couplings and loop phase; everything time dependent the
/// right-hand sides need.
struct Drive {
  double g31, g32, g41, g42;
  double phi;

  static Drive at(const SystemParams& params, double t) {
    return {rabi_envelope(params, Transition::T31, t),
            rabi_envelope(params, Transition::T32, t),
            rabi_envelope(params, Transition::T41, t),
            rabi_envelope(params, Transition::T42, t),
            relative_phase(params.phase, t)};
  }
};

/// Interaction-picture Hamiltonian (hbar = 1):
///   diag(0, D32 - D31, -D31, D32 - D31 - D42)
///   - (g31 |3><1| + g32 |3><2| + g42 |4><2| + g41 e^{-i Phi} |4><1| + h.c.)
/// so that H(4,1) = -g41 e^{-i Phi} and H(1,4) = -g41 e^{+i Phi}.
template <typename Scalar = double>
Matrix4c<Scalar> hamiltonian(const SystemParams& params, const Drive& drive) {
  using C = std::complex<Scalar>;
  const Scalar d31 = params.detuning(Transition::T31);
  const Scalar d32 = params.detuning(Transition::T32);
  const Scalar d42 = params.detuning(Transition::T42);

  Matrix4c<Scalar> h = Matrix4c<Scalar>::Zero();
  h(1, 1) = d32 - d31;
  h(2, 2) = -d31;
  h(3, 3) = d32 - d31 - d42;

  const C lower[4] = {
      C(-Scalar(drive.g31)), C(-Scalar(drive.g32)),
      -Scalar(drive.g41) * std::polar(Scalar(1), -Scalar(drive.phi)),
      C(-Scalar(drive.g42))};
  for (Transition tr : kTransitions) {
    const int u = upper_index(tr);
    const int l = lower_index(tr);
    h(u, l) = lower[static_cast<int>(tr)];
    h(l, u) = std::conj(lower[static_cast<int>(tr)]);
  }
  return h;
}

template <typename Scalar = double>
Matrix4c<Scalar> hamiltonian(const SystemParams& params, double t) {
  return hamiltonian<Scalar>(params, Drive::at(params, t));
}

/// The reference rate equations. Fills the nine independent entries, their
/// conjugates, and d(rho44) = -(d(rho11) + d(rho22) + d(rho33)).
template <typename Scalar = double>
Matrix4c<Scalar> rhs_literal(const Matrix4c<Scalar>& r,
                             const SystemParams& params, const Drive& drive) {
  using C = std::complex<Scalar>;
  const C I(0, 1);
  const DecayRates& d = params.decay;
  const Scalar g31 = drive.g31, g32 = drive.g32, g41 = drive.g41,
               g42 = drive.g42;
  const C ep = std::polar(Scalar(1), Scalar(drive.phi));
  const C em = std::conj(ep);
  const Scalar D31 = params.detuning(Transition::T31);
  const Scalar D32 = params.detuning(Transition::T32);
  const Scalar D42 = params.detuning(Transition::T42);

  // 0-based aliases: r11 == r(0,0), ...
  const C r11 = r(0, 0), r22 = r(1, 1), r33 = r(2, 2), r44 = r(3, 3);
  const C r12 = r(0, 1), r13 = r(0, 2), r14 = r(0, 3);
  const C r21 = r(1, 0), r23 = r(1, 2), r24 = r(1, 3);
  const C r31 = r(2, 0), r32 = r(2, 1), r34 = r(2, 3);
  const C r41 = r(3, 0), r42 = r(3, 1), r43 = r(3, 2);

  Matrix4c<Scalar> out;
  out(0, 0) = I * g31 * r31 - I * g31 * r13 + I * g41 * r41 * ep -
              I * g41 * r14 * em + Scalar(2 * d.gamma13) * r33 +
              Scalar(2 * d.gamma14) * r44;
  out(1, 1) = I * g32 * r32 - I * g32 * r23 + I * g42 * r42 - I * g42 * r24 +
              Scalar(2 * d.gamma23) * r33 + Scalar(2 * d.gamma24) * r44;
  out(2, 2) = -I * g31 * r31 - I * g32 * r32 + I * g31 * r13 + I * g32 * r23 -
              Scalar(2 * d.gamma3()) * r33;
  // Here the g42 rho14 term carries e^{-i Phi}.
  out(0, 1) = I * (D32 - D31) * r12 + I * g31 * r32 - I * g32 * r13 +
              I * g41 * r42 * ep - I * g42 * r14 * em - Scalar(d.Gamma12) * r12;
  out(0, 2) = -I * D31 * r13 + I * g31 * (r33 - r11) - I * g32 * r12 +
              I * g41 * r43 * ep - Scalar(d.Gamma13) * r13;
  out(0, 3) = I * (D32 - D31 - D42) * r14 + I * g41 * ep * (r44 - r11) -
              I * g42 * r12 + I * g31 * r34 - Scalar(d.Gamma14) * r14;
  out(1, 2) = -I * D32 * r23 + I * g32 * (r33 - r22) - I * g31 * r21 +
              I * g42 * r43 - Scalar(d.Gamma23) * r23;
  out(1, 3) = -I * D42 * r24 + I * g42 * (r44 - r22) - I * g41 * r21 * ep +
              I * g32 * r34 - Scalar(d.Gamma24) * r24;
  out(2, 3) = -I * (D42 - D32) * r34 + I * g31 * r14 + I * g32 * r24 -
              I * g41 * r31 * ep - I * g42 * r32 - Scalar(d.Gamma34) * r34;

  for (int k = 0; k < 3; ++k) out(k, k) = C(out(k, k).real());
  out(3, 3) = -(out(0, 0) + out(1, 1) + out(2, 2));
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) out(j, i) = std::conj(out(i, j));
  }
  return out;
}

/// Spontaneous emission feeding (2 gamma_ij from |i> into |j>) and
/// coherence damping at Gamma_ij.
template <typename Scalar = double>
Matrix4c<Scalar> dissipator(const Matrix4c<Scalar>& r, const DecayRates& d) {
  Matrix4c<Scalar> out;
  const Scalar damping[4][4] = {
      {0, Scalar(d.Gamma12), Scalar(d.Gamma13), Scalar(d.Gamma14)},
      {Scalar(d.Gamma12), 0, Scalar(d.Gamma23), Scalar(d.Gamma24)},
      {Scalar(d.Gamma13), Scalar(d.Gamma23), 0, Scalar(d.Gamma34)},
      {Scalar(d.Gamma14), Scalar(d.Gamma24), Scalar(d.Gamma34), 0}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = -damping[i][j] * r(i, j);
  }
  const Scalar p3 = r(2, 2).real(), p4 = r(3, 3).real();
  out(0, 0) = Scalar(2 * d.gamma13) * p3 + Scalar(2 * d.gamma14) * p4;
  out(1, 1) = Scalar(2 * d.gamma23) * p3 + Scalar(2 * d.gamma24) * p4;
  out(2, 2) = -Scalar(2 * d.gamma3()) * p3;
  out(3, 3) = -Scalar(2 * d.gamma4()) * p4;
  return out;
}

/// d(rho)/dt = -i [H, rho] + dissipator(rho).
template <typename Scalar = double>
Matrix4c<Scalar> rhs_derived(const Matrix4c<Scalar>& r,
                             const SystemParams& params, const Drive& drive) {
  const Matrix4c<Scalar> h = hamiltonian<Scalar>(params, drive);
  const std::complex<Scalar> minus_i(0, -1);
  Matrix4c<Scalar> out = minus_i * (h * r - r * h);
  out += dissipator<Scalar>(r, params.decay);
  return out;
}

template <typename Scalar = double>
Matrix4c<Scalar> rhs(RhsMode mode, const Matrix4c<Scalar>& r,
                     const SystemParams& params, const Drive& drive) {
  return mode == RhsMode::Literal ? rhs_literal<Scalar>(r, params, drive)
                                  : rhs_derived<Scalar>(r, params, drive);
}

Matrix4cd rhs_literal(const DensityMatrix& rho, const SystemParams& params,
                      double t);
Matrix4cd rhs_derived(const DensityMatrix& rho, const SystemParams& params,
                      double t);

/// Packed time derivative of a packed state; this is what integrators see.
StateVector packed_rhs(RhsMode mode, const StateVector& state,
                       const SystemParams& params, double t);

/// Names of the nine independent components, in the order
/// rho11, rho22, rho33, rho12, rho13, rho14, rho23, rho24, rho34.
inline constexpr std::array<const char*, 9> kComponentNames = {
    "rho11", "rho22", "rho33", "rho12", "rho13",
    "rho14", "rho23", "rho24", "rho34"};

/// Element-wise comparison of the two right-hand sides over random states.
struct RhsComparison {
  int samples = 0;
  double t = 0.0;
  std::array<double, 9> max_abs_diff{};
  double max_abs = 0.0;
  /// Largest difference left in rho12 after removing the extra phase
  /// factor on its g42 rho14 term, i.e. after subtracting
  /// -i g42 rho14 (e^{-i Phi} - 1).
  double rho12_unexplained = 0.0;

  /// Components whose max difference exceeds `tol`.
  std::vector<std::string> differing(double tol) const;
  std::string to_string(double tol) const;
};

RhsComparison compare_rhs(const SystemParams& params, double t, int n_samples,
                          std::uint64_t seed = 0);

/// Max absolute element-wise difference between the literal and derived
/// right-hand sides over `n_samples` random density matrices.
double rhs_discrepancy(const SystemParams& params, double t, int n_samples,
                       std::uint64_t seed = 0);

}  // namespace lambda_dem
