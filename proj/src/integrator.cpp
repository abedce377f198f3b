#include "lambda_dem/integrator.hpp"

#include <bit>
#include <cstdio>
#include <limits>

#include "lambda_dem/entanglement.hpp"

namespace lambda_dem {

std::string_view to_string(Method method) {
  return method == Method::RK4 ? "rk4" : "rk45";
}

void ensure_valid(const IntegratorConfig& cfg) {
  auto bad = [](const char* what) { throw ValidationError(what); };
  if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end)) {
    bad("integrator: non-finite time span");
  }
  if (!(cfg.t_end > cfg.t_start)) bad("integrator: t_end must exceed t_start");
  if (!(cfg.sample_dt > 0.0)) bad("integrator: sample_dt must be > 0");
  if (!(cfg.h > 0.0)) bad("integrator: h must be > 0");
  if (cfg.method == Method::RK45) {
    if (!(cfg.rtol > 0.0 && cfg.rtol < 1.0)) {
      bad("integrator: rtol must be in (0, 1)");
    }
    if (!(cfg.atol >= 0.0)) bad("integrator: atol must be >= 0");
  }
}

namespace {

class SampleRecorder {
 public:
  explicit SampleRecorder(Trajectory& traj) : traj_(traj) {}

  void record(double t, const StateVector& y) {
    DensityMatrix state(y);
    const double lam = eigvals(state).min();
    traj_.min_eigenvalue = std::min(traj_.min_eigenvalue, lam);
    if (lam < kPositivityAbort) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "positivity violated at t = %.6g (min eigenvalue %.3e)",
                    t, lam);
      throw IntegrationError(buf, t);
    }
    traj_.samples.push_back({t, state});
  }

 private:
  Trajectory& traj_;
};

void note_step(StepStats& stats, double h) {
  if (stats.accepted == 0) {
    stats.h_min = stats.h_max = h;
  } else {
    stats.h_min = std::min(stats.h_min, h);
    stats.h_max = std::max(stats.h_max, h);
  }
  ++stats.accepted;
}

}  // namespace

Trajectory integrate(const DensityMatrix& initial, const SystemParams& params,
                     const IntegratorConfig& cfg, RhsMode mode) {
  ensure_valid(params);
  ensure_valid(cfg);

  Trajectory traj;
  traj.params_hash = params_hash(params);
  traj.config = cfg;
  traj.mode = mode;
  traj.min_eigenvalue = std::numeric_limits<double>::infinity();

  StepStats& stats = traj.stats;
  auto f = [&](double t, const StateVector& y) {
    ++stats.rhs_evals;
    return packed_rhs(mode, y, params, t);
  };

  const long n_samples = static_cast<long>(
      std::floor((cfg.t_end - cfg.t_start) / cfg.sample_dt + 1e-9));
  traj.samples.reserve(n_samples + 1);
  SampleRecorder recorder(traj);

  StateVector y = initial.packed();
  recorder.record(cfg.t_start, y);
  double h_adaptive = cfg.h;

  for (long k = 0; k < n_samples; ++k) {
    const double t0 = cfg.t_start + static_cast<double>(k) * cfg.sample_dt;
    const double t1 = cfg.t_start + static_cast<double>(k + 1) * cfg.sample_dt;

    if (cfg.method == Method::RK4) {
      const long n = std::max<long>(
          1, static_cast<long>(std::ceil((t1 - t0) / cfg.h - 1e-9)));
      const double h = (t1 - t0) / static_cast<double>(n);
      for (long i = 0; i < n; ++i) {
        y = step_rk4(y, t0 + static_cast<double>(i) * h, h, f);
        note_step(stats, h);
      }
    } else {
      double t = t0;
      while (t < t1) {
        const bool last = h_adaptive >= t1 - t;
        const double h = last ? t1 - t : h_adaptive;
        const auto step = step_rk45(y, t, h, f, cfg.rtol, cfg.atol);
        if (step.accepted) {
          y = step.state;
          t = last ? t1 : t + h;
          note_step(stats, h);
        } else {
          ++stats.rejected;
        }
        // Truncated landing steps never shrink the adaptive step.
        if (!(last && step.accepted) || step.h_next > h_adaptive) {
          h_adaptive = step.h_next;
        }
        if (h_adaptive < kMinStep) {
          throw IntegrationError(
              "step size underflow at t = " + std::to_string(t), t);
        }
      }
    }
    recorder.record(t1, y);
  }
  return traj;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;

  void add(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  void add(double x) { add(std::bit_cast<std::uint64_t>(x)); }
};

}  // namespace

std::uint64_t params_hash(const SystemParams& p) {
  Fnv1a f;
  for (const DriveField& fd : p.fields) {
    f.add(static_cast<std::uint64_t>(fd.transition));
    f.add(static_cast<std::uint64_t>(fd.shape));
    f.add(fd.g0);
    f.add(fd.detuning);
    f.add(fd.tau);
    f.add(fd.t0);
  }
  const DecayRates& d = p.decay;
  for (double x : {d.gamma13, d.gamma23, d.gamma14, d.gamma24, d.Gamma12,
                   d.Gamma13, d.Gamma14, d.Gamma23, d.Gamma24, d.Gamma34}) {
    f.add(x);
  }
  f.add(p.spatial.r);
  f.add(p.spatial.w);
  f.add(p.phase.phi0);
  f.add(p.phase.Delta);
  f.add(p.phase.Kdotr);
  return f.h;
}

}  // namespace lambda_dem
