#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lambda_dem/dressed.hpp"
#include "lambda_dem/entanglement.hpp"
#include "lambda_dem/integrator.hpp"
#include "lambda_dem/liouvillian.hpp"
#include "lambda_dem/model.hpp"

namespace lambda_dem {

/// Everything needed to run one simulation.
struct SimulationConfig {
  SystemParams params;
  IntegratorConfig integrator;
  RhsMode mode = RhsMode::Derived;
  int initial_level = 3;
  BasisPolicy basis_policy = BasisPolicy::FixedPeak;

  bool operator==(const SimulationConfig&) const = default;
};

/// Baseline regime shared by the figure presets: all emission rates 1,
/// Gamma_i3 = Gamma_i4 = 2, Gamma34 = 4, Gamma12 = 1, zero detunings,
/// g = 3 CW on every transition except a Gaussian g41 (tau = 20, peak at
/// t = 0), r = 50, w = 100, phi0 = 0, start in |3>, t in [0, 100].
SimulationConfig baseline_config();

struct SimulationResult {
  Trajectory trajectory;
  DemSeries dem;
  std::optional<DressedSeries> dressed;
};

SimulationResult simulate(const SimulationConfig& cfg, bool with_dressed);

enum class SweepAxis { Phi0, Tau, G41, G42, PulsedSet };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

/// Numeric axis value, or a field-subset label such as "41" or
/// "31+32+41+42" (or "none") for PulsedSet.
using AxisValue = std::variant<double, std::string>;

std::string axis_label(const AxisValue& v);

struct OutputSet {
  bool dem_series = true;
  bool dressed_series = false;
  bool steady_summary = true;

  bool operator==(const OutputSet&) const = default;
};

struct SweepSpec {
  std::string name = "sweep";
  SimulationConfig base;
  SweepAxis axis = SweepAxis::Phi0;
  std::vector<AxisValue> values;
  OutputSet outputs;
  /// Steady-state window; defaults to the last 20% of the horizon.
  std::optional<std::pair<double, double>> window;
};

/// Throws ValidationError for an empty value list, a value of the wrong
/// kind, or an axis the base configuration cannot vary.
void ensure_valid(const SweepSpec& spec);

/// The base config with one axis value applied.
SimulationConfig apply_axis(const SimulationConfig& base, SweepAxis axis,
                            const AxisValue& value);

std::pair<double, double> default_window(const IntegratorConfig& cfg);

struct SteadySummary {
  std::pair<double, double> t_window{};
  double dem_mean = 0.0;
  double dem_std = 0.0;
  std::optional<DressedPopulations> dressed_pops_mean;
  std::size_t n_samples = 0;

  /// The run counts as steady when the windowed DEM spread is below 1e-3.
  bool steady() const { return dem_std < 1e-3; }
};

SteadySummary steady_summary(const DemSeries& dem,
                             std::pair<double, double> window);
SteadySummary steady_summary(const DemSeries& dem, const DressedSeries& dressed,
                             std::pair<double, double> window);

struct SweepRow {
  AxisValue value;
  SimulationConfig config;
  bool ok = false;
  std::string error;
  SimulationResult result;
  std::optional<SteadySummary> steady;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // same order as spec.values
};

/// Worker count: LAMBDA_DEM_THREADS if set and positive, else the number
/// of logical cores.
unsigned default_thread_count();

/// Runs every row (concurrently when threads > 1). A failing row is marked
/// and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline constexpr std::array<const char*, 7> kPresetNames = {
    "fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6a", "fig6b"};

SweepSpec preset(std::string_view name);

}  // namespace lambda_dem
