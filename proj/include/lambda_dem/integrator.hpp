#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lambda_dem/liouvillian.hpp"
#include "lambda_dem/model.hpp"

namespace lambda_dem {

enum class Method { RK4, RK45 };

std::string_view to_string(Method method);

struct IntegratorConfig {
  Method method = Method::RK4;
  double h = 1e-3;  // fixed step (RK4), initial step (RK45)
  double rtol = 1e-8;
  double atol = 1e-10;
  double t_start = 0.0;
  double t_end = 100.0;
  double sample_dt = 0.05;

  bool operator==(const IntegratorConfig&) const = default;
};

/// Throws ValidationError when the config is unusable.
void ensure_valid(const IntegratorConfig& cfg);

/// Steps below this size abort an adaptive integration.
inline constexpr double kMinStep = 1e-12;
/// A sampled state whose smallest eigenvalue is below this aborts.
inline constexpr double kPositivityAbort = -1e-6;

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double h_min = 0.0;
  double h_max = 0.0;
};

struct TrajectorySample {
  double t;
  DensityMatrix state;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::uint64_t params_hash = 0;
  IntegratorConfig config;
  RhsMode mode = RhsMode::Derived;
  StepStats stats;
  double min_eigenvalue = 0.0;  // over all samples
};

template <typename Vec>
void check_finite(const Vec& v, double t) {
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v(i))) {
      throw IntegrationError(
          "non-finite derivative in component " + std::to_string(i) +
              " at t = " + std::to_string(t),
          t, i);
    }
  }
}

/// Classical four-stage Runge-Kutta step. `f(t, y)` returns dy/dt.
template <typename Vec, typename Rhs>
Vec step_rk4(const Vec& y, double t, double h, Rhs&& f) {
  const Vec k1 = f(t, y);
  check_finite(k1, t);
  const Vec k2 = f(t + 0.5 * h, Vec(y + (0.5 * h) * k1));
  check_finite(k2, t + 0.5 * h);
  const Vec k3 = f(t + 0.5 * h, Vec(y + (0.5 * h) * k2));
  check_finite(k3, t + 0.5 * h);
  const Vec k4 = f(t + h, Vec(y + h * k3));
  check_finite(k4, t + h);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Vec>
struct Rk45Result {
  Vec state;        // new state if accepted, input state otherwise
  double h_next;    // proposed next step
  double error;     // scaled error norm; accepted iff <= 1
  bool accepted;
};

/// One Dormand-Prince 5(4) attempt, advancing with the fifth-order
/// solution. Error norm is max_i |e_i| / (atol + rtol max(|y_i|, |y'_i|));
/// the step controller uses safety 0.9 and clamps the factor to [0.2, 5].
template <typename Vec, typename Rhs>
Rk45Result<Vec> step_rk45(const Vec& y, double t, double h, Rhs&& f,
                          double rtol, double atol) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // fifth minus fourth order weights
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(h > 0.0)) throw IntegrationError("step_rk45: h must be > 0", t);

  const Vec k1 = f(t, y);
  check_finite(k1, t);
  const Vec k2 = f(t + c2 * h, Vec(y + h * a21 * k1));
  check_finite(k2, t + c2 * h);
  const Vec k3 = f(t + c3 * h, Vec(y + h * (a31 * k1 + a32 * k2)));
  check_finite(k3, t + c3 * h);
  const Vec k4 =
      f(t + c4 * h, Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
  check_finite(k4, t + c4 * h);
  const Vec k5 = f(t + c5 * h,
                   Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
  check_finite(k5, t + c5 * h);
  const Vec k6 = f(t + h, Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5)));
  check_finite(k6, t + h);
  const Vec y_new =
      y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Vec k7 = f(t + h, y_new);
  check_finite(k7, t + h);
  const Vec err_vec =
      h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  double err = 0.0;
  for (int i = 0; i < y.size(); ++i) {
    const double sc =
        atol + rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
    const double e = std::abs(err_vec(i));
    if (e > 0.0) err = std::max(err, sc > 0.0 ? e / sc : HUGE_VAL);
  }

  const double factor =
      err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
  const bool accepted = err <= 1.0;
  const double h_next = h * factor;
  if (!accepted && h_next < kMinStep) {
    throw IntegrationError("step size underflow at t = " + std::to_string(t),
                           t);
  }
  return {accepted ? y_new : y, h_next, err, accepted};
}

/// Integrates the density matrix from cfg.t_start to cfg.t_end and samples
/// it at t_start + k * sample_dt. Every sample is eigen-checked.
Trajectory integrate(const DensityMatrix& initial, const SystemParams& params,
                     const IntegratorConfig& cfg, RhsMode mode);

/// Fingerprint of every parameter (FNV-1a over the bit patterns).
std::uint64_t params_hash(const SystemParams& params);

}  // namespace lambda_dem
