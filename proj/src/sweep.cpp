#include "lambda_dem/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

namespace lambda_dem {

SimulationConfig baseline_config() {
  SimulationConfig cfg;
  SystemParams& p = cfg.params;
  p.decay = DecayRates::from_emission(1.0, 1.0, 1.0, 1.0, 1.0);
  for (Transition tr : kTransitions) {
    DriveField& f = p.field(tr);
    f.g0 = 3.0;
    f.detuning = 0.0;
    f.shape = Envelope::CW;
    f.tau = 20.0;
    f.t0 = 0.0;
  }
  p.field(Transition::T41).shape = Envelope::Gaussian;
  p.spatial = {50.0, 100.0};
  p.phase = {0.0, 0.0, 0.0};
  cfg.integrator = IntegratorConfig{};
  cfg.mode = RhsMode::Derived;
  cfg.initial_level = 3;
  cfg.basis_policy = BasisPolicy::FixedPeak;
  return cfg;
}

SimulationResult simulate(const SimulationConfig& cfg, bool with_dressed) {
  SimulationResult out;
  out.trajectory =
      integrate(DensityMatrix::pure_level(cfg.initial_level), cfg.params,
                cfg.integrator, cfg.mode);
  out.dem = dem_series(out.trajectory);
  if (with_dressed) {
    out.dressed = dressed_series(out.trajectory, cfg.params, cfg.basis_policy);
  }
  return out;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Phi0: return "phi0";
    case SweepAxis::Tau: return "tau";
    case SweepAxis::G41: return "g41";
    case SweepAxis::G42: return "g42";
    case SweepAxis::PulsedSet: return "pulsed_set";
  }
  return "?";
}

SweepAxis parse_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::Phi0, SweepAxis::Tau, SweepAxis::G41,
                      SweepAxis::G42, SweepAxis::PulsedSet}) {
    if (to_string(a) == name) return a;
  }
  throw ValidationError("unknown sweep axis '" + std::string(name) + "'");
}

std::string axis_label(const AxisValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::get<double>(v));
  return buf;
}

namespace {

/// "31+41" -> {T31, T41}; "none" -> {}.
std::vector<Transition> parse_field_set(const std::string& label) {
  std::vector<Transition> out;
  if (label == "none") return out;
  std::istringstream is(label);
  std::string tok;
  while (std::getline(is, tok, '+')) {
    bool found = false;
    for (Transition tr : kTransitions) {
      if (to_string(tr) == tok) {
        out.push_back(tr);
        found = true;
      }
    }
    if (!found) {
      throw ValidationError("pulsed_set: unknown transition '" + tok +
                            "' in '" + label + "'");
    }
  }
  if (out.empty()) throw ValidationError("pulsed_set: empty label");
  return out;
}

bool any_gaussian(const SystemParams& p) {
  for (const auto& f : p.fields) {
    if (f.shape == Envelope::Gaussian) return true;
  }
  return false;
}

}  // namespace

void ensure_valid(const SweepSpec& spec) {
  if (spec.values.empty()) throw ValidationError("sweep: empty value list");
  const bool want_label = spec.axis == SweepAxis::PulsedSet;
  for (const AxisValue& v : spec.values) {
    if (std::holds_alternative<std::string>(v) != want_label) {
      throw ValidationError(std::string("sweep: axis ") +
                            std::string(to_string(spec.axis)) +
                            (want_label ? " takes field-set labels"
                                        : " takes numeric values"));
    }
    if (want_label) parse_field_set(std::get<std::string>(v));
  }
  if (spec.axis == SweepAxis::Tau && !any_gaussian(spec.base.params)) {
    throw ValidationError("sweep: axis tau needs at least one Gaussian field");
  }
  if (spec.window && !(spec.window->second > spec.window->first)) {
    throw ValidationError("sweep: steady window must have t2 > t1");
  }
}

SimulationConfig apply_axis(const SimulationConfig& base, SweepAxis axis,
                            const AxisValue& value) {
  SimulationConfig cfg = base;
  SystemParams& p = cfg.params;
  switch (axis) {
    case SweepAxis::Phi0:
      p.phase.phi0 = std::get<double>(value);
      break;
    case SweepAxis::Tau:
      for (auto& f : p.fields) {
        if (f.shape == Envelope::Gaussian) f.tau = std::get<double>(value);
      }
      break;
    case SweepAxis::G41:
      p.field(Transition::T41).g0 = std::get<double>(value);
      break;
    case SweepAxis::G42:
      p.field(Transition::T42).g0 = std::get<double>(value);
      break;
    case SweepAxis::PulsedSet: {
      for (auto& f : p.fields) f.shape = Envelope::CW;
      for (Transition tr : parse_field_set(std::get<std::string>(value))) {
        p.field(tr).shape = Envelope::Gaussian;
      }
      break;
    }
  }
  return cfg;
}

std::pair<double, double> default_window(const IntegratorConfig& cfg) {
  return {cfg.t_end - 0.2 * (cfg.t_end - cfg.t_start), cfg.t_end};
}

namespace {

// Sample indices with t inside [t1, t2], edges widened by a relative 1e-9.
template <typename Series>
std::vector<std::size_t> window_indices(const Series& s,
                                        std::pair<double, double> w) {
  if (!(w.second > w.first)) {
    throw ValidationError("steady_summary: window needs t2 > t1");
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(w.second));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].t >= w.first - slack && s[i].t <= w.second + slack) {
      idx.push_back(i);
    }
  }
  if (idx.empty()) throw ValidationError("steady_summary: empty window");
  return idx;
}

}  // namespace

SteadySummary steady_summary(const DemSeries& dem,
                             std::pair<double, double> window) {
  const auto idx = window_indices(dem, window);
  SteadySummary out;
  out.t_window = window;
  out.n_samples = idx.size();
  double sum = 0.0;
  for (auto i : idx) sum += dem[i].dem;
  out.dem_mean = sum / static_cast<double>(idx.size());
  double var = 0.0;
  for (auto i : idx) var += (dem[i].dem - out.dem_mean) * (dem[i].dem - out.dem_mean);
  out.dem_std = std::sqrt(var / static_cast<double>(idx.size()));
  return out;
}

SteadySummary steady_summary(const DemSeries& dem, const DressedSeries& dressed,
                             std::pair<double, double> window) {
  SteadySummary out = steady_summary(dem, window);
  const auto idx = window_indices(dressed.samples, window);
  DressedPopulations mean{};
  for (auto i : idx) {
    for (int k = 0; k < 4; ++k) mean[k] += dressed.samples[i].pop[k];
  }
  for (double& m : mean) m /= static_cast<double>(idx.size());
  out.dressed_pops_mean = mean;
  return out;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("LAMBDA_DEM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void run_row(const SweepSpec& spec, SweepRow& row) {
  try {
    row.config = apply_axis(spec.base, spec.axis, row.value);
    row.result = simulate(row.config, spec.outputs.dressed_series);
    if (spec.outputs.steady_summary) {
      const auto w = spec.window.value_or(default_window(row.config.integrator));
      row.steady = row.result.dressed
                       ? steady_summary(row.result.dem, *row.result.dressed, w)
                       : steady_summary(row.result.dem, w);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  ensure_valid(spec);
  SweepResult out;
  out.spec = spec;
  out.rows.resize(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    out.rows[i].value = spec.values[i];
  }

  if (threads == 0) threads = default_thread_count();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(out.rows.size()));
  if (threads <= 1) {
    for (auto& row : out.rows) run_row(spec, row);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < out.rows.size(); i = next++) {
        run_row(spec, out.rows[i]);
      }
    });
  }
  pool.clear();  // joins
  return out;
}

SweepSpec preset(std::string_view name) {
  using std::numbers::pi;
  SweepSpec spec;
  spec.name = std::string(name);
  spec.base = baseline_config();
  SystemParams& p = spec.base.params;

  const std::vector<AxisValue> phases = {0.0, pi / 2, pi};

  if (name == "fig2") {
    spec.axis = SweepAxis::Phi0;
    spec.values = phases;
  } else if (name == "fig3") {
    for (auto& f : p.fields) f.shape = Envelope::Gaussian;
    spec.axis = SweepAxis::Phi0;
    spec.values = phases;
  } else if (name == "fig4") {
    p.phase.phi0 = pi;
    spec.axis = SweepAxis::Tau;
    spec.values = {20.0, 40.0, 60.0};
  } else if (name == "fig5a" || name == "fig5b" || name == "fig6a" ||
             name == "fig6b") {
    // Two fields off, g41 and g42 CW.
    p.field(Transition::T31).g0 = 0.0;
    p.field(Transition::T32).g0 = 0.0;
    for (auto& f : p.fields) f.shape = Envelope::CW;
    p.field(Transition::T42).g0 = 3.0;
    const bool weak = name.back() == 'a';
    p.field(Transition::T41).g0 = weak ? 0.03 : 3.0;
    spec.axis = SweepAxis::G41;
    spec.values = {weak ? 0.03 : 3.0};
    spec.outputs.dressed_series = name.starts_with("fig6");
  } else {
    std::string known;
    for (const char* n : kPresetNames) known += std::string(" ") + n;
    throw ValidationError("unknown preset '" + std::string(name) +
                          "' (known:" + known + ")");
  }
  return spec;
}

}  // namespace lambda_dem
