#include "lambda_dem/entanglement.hpp"

#include <cstdio>
#include <string>

#include "lambda_dem/integrator.hpp"

namespace lambda_dem {

Spectrum4<double> eigvals(const DensityMatrix& rho) {
  return eigvals_hermitian4<double>(rho.matrix());
}

double entropy_of(const Spectrum4<double>& spec) {
  if (spec.min() < -kPositivityTolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "density matrix not positive: min eigenvalue %.3e",
                  spec.min());
    throw PositivityError(buf, spec.min());
  }
  double s = 0.0;
  for (double lam : spec.lambda) {
    lam = std::clamp(lam, 0.0, 1.0);
    if (lam < 1e-300) continue;  // 0 ln 0 = 0
    s -= lam * std::log(lam);
  }
  return s;
}

double dem(const DensityMatrix& rho) { return entropy_of(eigvals(rho)); }

double dem(const Matrix4cd& rho) {
  return entropy_of(eigvals_hermitian4<double>(rho));
}

DemSeries dem_series(const Trajectory& traj) {
  DemSeries out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    try {
      out.push_back({s.t, dem(s.state)});
    } catch (const PositivityError& e) {
      throw PositivityError(std::string(e.what()) + " at t = " +
                                std::to_string(s.t),
                            e.min_eigenvalue());
    }
  }
  return out;
}

}  // namespace lambda_dem
