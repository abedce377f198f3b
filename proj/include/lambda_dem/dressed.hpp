#pragma once

#include <array>
#include <string>
#include <vector>

#include "lambda_dem/model.hpp"

namespace lambda_dem {

struct Trajectory;

/// Closed-form dressed states for g31 = g32 = 0, with n = sqrt(g41^2 + g42^2):
///   A = |3>
///   B = (-g42 |1> + g41 |2>) / n
///   C = ( g41 |1> + g42 |2>) / (sqrt2 n) + |4> / sqrt2
///   D = (-g41 |1> - g42 |2>) / (sqrt2 n) + |4> / sqrt2
/// Built from the coupling magnitudes; the loop phase is not folded in.
struct DressedBasis {
  std::array<Vector4cd, 4> states;
  double g41 = 0.0;
  double g42 = 0.0;

  const Vector4cd& A() const { return states[0]; }
  const Vector4cd& B() const { return states[1]; }
  const Vector4cd& C() const { return states[2]; }
  const Vector4cd& D() const { return states[3]; }

  /// Columns A, B, C, D.
  Matrix4cd matrix() const;
};

DressedBasis dressed_basis(double g41, double g42);

using DressedPopulations = std::array<double, 4>;

/// <X| rho |X> for X = A, B, C, D.
DressedPopulations dressed_populations(const DensityMatrix& rho,
                                       const DressedBasis& basis);

enum class BasisPolicy { FixedPeak, Instantaneous };

std::string_view to_string(BasisPolicy policy);

struct DressedSample {
  double t;
  DressedPopulations pop;
  bool fallback;  // basis carried over from an earlier time
};

struct DressedSeries {
  std::vector<DressedSample> samples;
  std::vector<std::string> warnings;

  bool used_fallback() const;
};

/// Projects every trajectory sample onto the dressed basis.
///  - FixedPeak: basis from each coupling at its envelope peak.
///  - Instantaneous: basis from the envelopes at the sample time; where
///    both vanish the last valid basis is reused and the sample flagged.
DressedSeries dressed_series(const Trajectory& traj, const SystemParams& params,
                             BasisPolicy policy);

}  // namespace lambda_dem
