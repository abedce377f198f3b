#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lambda_dem/errors.hpp"

namespace lambda_dem {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vector4c = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

using Matrix4cd = Matrix4c<double>;
using Vector4cd = Vector4c<double>;

/// Packed real state: three populations and six complex coherences.
using StateVector = Eigen::Matrix<double, 15, 1>;

// Levels are numbered 1..4 in names and 0..3 in matrix indices.
// |1>, |2> are the ground states, |3>, |4> the excited states.

enum class Transition { T31 = 0, T32 = 1, T41 = 2, T42 = 3 };
enum class Envelope { CW, Gaussian };

inline constexpr std::array<Transition, 4> kTransitions = {
    Transition::T31, Transition::T32, Transition::T41, Transition::T42};

std::string_view to_string(Transition tr);
std::string_view to_string(Envelope shape);

/// Excited (upper) and ground (lower) matrix indices of a transition.
constexpr int upper_index(Transition tr) {
  return (tr == Transition::T31 || tr == Transition::T32) ? 2 : 3;
}
constexpr int lower_index(Transition tr) {
  return (tr == Transition::T31 || tr == Transition::T41) ? 0 : 1;
}

/// One laser coupling. g0, detuning in units of gamma; tau, t0 in 1/gamma.
struct DriveField {
  Transition transition = Transition::T31;
  double g0 = 0.0;
  double detuning = 0.0;
  Envelope shape = Envelope::CW;
  double tau = 20.0;  // Gaussian only
  double t0 = 0.0;    // pulse peak time, Gaussian only

  /// Only the |4>-|1> coupling carries the closed-loop phase factor.
  bool carries_phase() const { return transition == Transition::T41; }

  bool operator==(const DriveField&) const = default;
};

struct SpatialConfig {
  double r = 50.0;
  double w = 100.0;

  double attenuation() const { return std::exp(-(r * r) / (w * w)); }

  bool operator==(const SpatialConfig&) const = default;
};

/// Spontaneous emission rates (level i -> j is 2*gamma_ij) and coherence
/// damping rates Gamma_ij, all in units of gamma.
struct DecayRates {
  double gamma13 = 1.0;
  double gamma23 = 1.0;
  double gamma14 = 1.0;
  double gamma24 = 1.0;

  double Gamma12 = 1.0;
  double Gamma13 = 2.0;
  double Gamma14 = 2.0;
  double Gamma23 = 2.0;
  double Gamma24 = 2.0;
  double Gamma34 = 4.0;

  double gamma3() const { return gamma13 + gamma23; }
  double gamma4() const { return gamma14 + gamma24; }

  /// Coherence dampings built from the emission rates:
  /// Gamma_i3 = gamma3, Gamma_i4 = gamma4, Gamma34 = gamma3 + gamma4,
  /// and a ground-state dephasing Gamma12 supplied separately.
  static DecayRates from_emission(double g13, double g23, double g14,
                                  double g24, double ground_dephasing);

  bool operator==(const DecayRates&) const = default;
};

/// Closed-loop relative phase Phi(t) = Delta * t - Kdotr + phi0.
struct PhaseConfig {
  double phi0 = 0.0;
  double Delta = 0.0;
  double Kdotr = 0.0;

  bool operator==(const PhaseConfig&) const = default;
};

struct SystemParams {
  std::array<DriveField, 4> fields{};
  DecayRates decay{};
  SpatialConfig spatial{};
  PhaseConfig phase{};

  SystemParams();

  DriveField& field(Transition tr) { return fields[static_cast<int>(tr)]; }
  const DriveField& field(Transition tr) const {
    return fields[static_cast<int>(tr)];
  }

  double detuning(Transition tr) const { return field(tr).detuning; }

  /// (D32 + D41) - (D31 + D42) from the per-field detunings.
  double multiphoton_detuning() const;

  bool operator==(const SystemParams&) const = default;
};

double rabi_envelope(const DriveField& field, const SpatialConfig& spatial,
                     double t);

inline double rabi_envelope(const SystemParams& params, Transition tr,
                            double t) {
  return rabi_envelope(params.field(tr), params.spatial, t);
}

double relative_phase(const PhaseConfig& phase, double t);

enum class Severity { Warning, Error };

struct ValidationIssue {
  Severity severity;
  std::string key;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool empty() const { return issues.empty(); }
  bool has_errors() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  std::string to_string() const;
};

ValidationReport validate(const SystemParams& params);

/// Throws ValidationError listing every error in the report.
void ensure_valid(const SystemParams& params);

/// 4x4 Hermitian unit-trace state stored as 15 reals. rho44 is implicit
/// (1 - rho11 - rho22 - rho33) and the lower triangle is the conjugate of
/// the upper one, so trace and Hermiticity hold by construction.
class DensityMatrix {
 public:
  DensityMatrix();
  explicit DensityMatrix(const StateVector& packed) : packed_(packed) {}

  /// Reads the real diagonal (first three entries) and upper triangle.
  static DensityMatrix from_matrix(const Matrix4cd& m);
  /// Pure bare level, 1-based.
  static DensityMatrix pure_level(int level);
  static DensityMatrix maximally_mixed();

  const StateVector& packed() const { return packed_; }

  /// Population of bare level 1..4.
  double population(int level) const;
  /// Element rho_ij with 1-based indices.
  std::complex<double> operator()(int i, int j) const;

  Matrix4cd matrix() const;

  bool operator==(const DensityMatrix&) const = default;

 private:
  StateVector packed_;
};

/// Packed index of the real part of rho_ij (i < j, 0-based), imag at +1.
int coherence_offset(int i, int j);

/// Packs the independent components of a Hermitian (or anti-Hermitian
/// derivative) 4x4 matrix. The 44 entry is dropped.
StateVector pack(const Matrix4cd& m);

/// Rebuilds the full matrix of a packed derivative; the 44 entry is minus
/// the sum of the other populations.
Matrix4cd unpack_derivative(const StateVector& v);

}  // namespace lambda_dem
