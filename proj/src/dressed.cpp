#include "lambda_dem/dressed.hpp"

#include <cmath>
#include <optional>

#include "lambda_dem/integrator.hpp"

namespace lambda_dem {

Matrix4cd DressedBasis::matrix() const {
  Matrix4cd m;
  for (int k = 0; k < 4; ++k) m.col(k) = states[k];
  return m;
}

DressedBasis dressed_basis(double g41, double g42) {
  if (!(g41 >= 0.0) || !(g42 >= 0.0)) {
    throw ValidationError("dressed_basis: couplings must be >= 0");
  }
  const double n = std::hypot(g41, g42);
  if (!(n > 0.0)) {
    throw DegenerateBasisError("dressed_basis: g41 and g42 both vanish");
  }
  const double a = g41 / n;
  const double b = g42 / n;
  const double r = 1.0 / std::sqrt(2.0);

  DressedBasis basis;
  basis.g41 = g41;
  basis.g42 = g42;
  basis.states[0] = Vector4cd(0, 0, 1, 0);
  basis.states[1] = Vector4cd(-b, a, 0, 0);
  basis.states[2] = Vector4cd(a * r, b * r, 0, r);
  basis.states[3] = Vector4cd(-a * r, -b * r, 0, r);
  return basis;
}

DressedPopulations dressed_populations(const DensityMatrix& rho,
                                       const DressedBasis& basis) {
  const Matrix4cd m = rho.matrix();
  DressedPopulations p;
  for (int k = 0; k < 4; ++k) {
    const Vector4cd& x = basis.states[k];
    p[k] = x.dot(m * x).real();  // dot() conjugates its left operand
  }
  return p;
}

std::string_view to_string(BasisPolicy policy) {
  return policy == BasisPolicy::FixedPeak ? "fixed_peak" : "instantaneous";
}

bool DressedSeries::used_fallback() const {
  for (const auto& s : samples) {
    if (s.fallback) return true;
  }
  return false;
}

namespace {

double peak_envelope(const SystemParams& params, Transition tr) {
  const DriveField& f = params.field(tr);
  return rabi_envelope(f, params.spatial, f.shape == Envelope::CW ? 0.0 : f.t0);
}

}  // namespace

DressedSeries dressed_series(const Trajectory& traj, const SystemParams& params,
                             BasisPolicy policy) {
  DressedSeries out;
  out.samples.reserve(traj.samples.size());
  if (params.field(Transition::T31).g0 != 0.0 ||
      params.field(Transition::T32).g0 != 0.0) {
    out.warnings.emplace_back(
        "g31 or g32 nonzero: dressed basis assumes both fields are off");
  }

  // Throws when the peak couplings are degenerate.
  const DressedBasis peak = dressed_basis(
      peak_envelope(params, Transition::T41),
      peak_envelope(params, Transition::T42));

  if (policy == BasisPolicy::FixedPeak) {
    for (const auto& s : traj.samples) {
      out.samples.push_back({s.t, dressed_populations(s.state, peak), false});
    }
    return out;
  }

  std::optional<DressedBasis> last;
  for (const auto& s : traj.samples) {
    const double g41 = rabi_envelope(params, Transition::T41, s.t);
    const double g42 = rabi_envelope(params, Transition::T42, s.t);
    bool fallback = false;
    if (std::hypot(g41, g42) > 0.0) {
      last = dressed_basis(g41, g42);
    } else {
      fallback = true;
      if (!last) last = peak;
    }
    out.samples.push_back(
        {s.t, dressed_populations(s.state, *last), fallback});
  }
  if (out.used_fallback()) {
    out.warnings.emplace_back(
        "couplings vanished at some samples; earlier basis reused there");
  }
  return out;
}

}  // namespace lambda_dem
