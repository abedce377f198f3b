#include "cli.hpp"

#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "lambda_dem/config.hpp"
#include "lambda_dem/csv.hpp"
#include "lambda_dem/liouvillian.hpp"
#include "lambda_dem/sweep.hpp"

namespace lambda_dem::cli {

namespace fs = std::filesystem;

namespace {

void print_warnings(const SystemParams& params, std::ostream& err) {
  for (const auto& issue : validate(params).issues) {
    if (issue.severity == Severity::Warning) {
      err << "warning: " << issue.key << ": " << issue.message << '\n';
    }
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void report_run(const SimulationResult& r, const fs::path& file,
                std::ostream& out) {
  const auto& tr = r.trajectory;
  out << "wrote " << file.string() << " (" << tr.samples.size()
      << " samples, " << tr.stats.accepted << " steps";
  if (tr.stats.rejected) out << ", " << tr.stats.rejected << " rejected";
  out << ")\n";
  if (!r.dem.empty()) {
    out << "  final DEM " << format_real(r.dem.back().dem)
        << ", min eigenvalue " << format_real(tr.min_eigenvalue) << '\n';
  }
}

int cmd_simulate(const std::string& config, const std::string& mode,
                 const fs::path& out_dir, bool dressed, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg = load_config(config);
  if (mode == "literal") cfg.sim.mode = RhsMode::Literal;
  if (mode == "derived") cfg.sim.mode = RhsMode::Derived;
  print_warnings(cfg.sim.params, err);

  const SimulationResult r = simulate(cfg.sim, dressed);
  if (r.dressed) {
    for (const auto& w : r.dressed->warnings) err << "warning: " << w << '\n';
  }
  ensure_dir(out_dir);
  const fs::path file =
      out_dir / (cfg.output_prefix + (dressed ? "_dressed.csv" : ".csv"));
  write_series_csv(file, r.trajectory, r.dem,
                   r.dressed ? &*r.dressed : nullptr);
  report_run(r, file, out);
  return kExitOk;
}

int cmd_sweep(const std::string& preset_name, const std::string& config,
              const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  SweepSpec spec;
  if (!preset_name.empty()) {
    spec = preset(preset_name);
  } else {
    const RunConfig cfg = load_config(config);
    spec = to_sweep_spec(cfg, cfg.output_prefix);
  }
  print_warnings(spec.base.params, err);

  const SweepResult result = run_sweep(spec);
  ensure_dir(out_dir);

  std::set<std::string> used;
  bool failed = false;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    if (!row.ok) {
      failed = true;
      err << "row " << i << " (" << to_string(spec.axis) << " = "
          << axis_label(row.value) << ") failed: " << row.error << '\n';
      continue;
    }
    std::string stem = spec.name + "_" + std::string(to_string(spec.axis)) +
                       "_" + axis_label(row.value);
    if (!used.insert(stem).second) stem += "_" + std::to_string(i);
    const fs::path file = out_dir / (stem + ".csv");
    write_series_csv(file, row.result.trajectory, row.result.dem,
                     row.result.dressed ? &*row.result.dressed : nullptr);
    report_run(row.result, file, out);
    if (row.steady) {
      out << "  steady DEM " << format_real(row.steady->dem_mean) << " +- "
          << format_real(row.steady->dem_std) << " over ["
          << format_real(row.steady->t_window.first) << ", "
          << format_real(row.steady->t_window.second) << "]"
          << (row.steady->steady() ? "" : " (not steady)") << '\n';
    }
  }
  const fs::path summary = out_dir / (spec.name + "_summary.csv");
  write_sweep_summary_csv(summary, result);
  out << "wrote " << summary.string() << '\n';
  return failed ? kExitRuntime : kExitOk;
}

int cmd_check(const std::string& config, int samples, std::uint64_t seed,
              double t, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(config);
  print_warnings(cfg.sim.params, err);
  const RhsComparison cmp = compare_rhs(cfg.sim.params, t, samples, seed);
  out << cmp.to_string(1e-12);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Closed-loop double-lambda atom: density-matrix dynamics, degree of "
      "entanglement and dressed-state populations"};
  app.name(args.empty() ? "lambda_dem" : fs::path(args[0]).filename().string());
  app.set_version_flag("--version", std::string("lambda_dem ") + LAMBDA_DEM_VERSION);
  app.require_subcommand(1);

  std::string config, mode, preset_name, out_dir;
  int samples = 100;
  std::uint64_t seed = 0;
  double check_time = 0.0;

  auto* simulate = app.add_subcommand("simulate", "Integrate one configuration");
  simulate->add_option("--config", config, "Configuration file")->required();
  simulate->add_option("--mode", mode, "Right-hand side: literal or derived")
      ->check(CLI::IsMember({"literal", "derived"}));
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a preset or configured sweep");
  auto* preset_opt = sweep->add_option("--preset", preset_name, "Figure preset")
                         ->check(CLI::IsMember(std::vector<std::string>(
                             kPresetNames.begin(), kPresetNames.end())));
  auto* config_opt =
      sweep->add_option("--config", config, "Configuration with a [sweep] section");
  preset_opt->excludes(config_opt);
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* dressed = app.add_subcommand("dressed", "Integrate and project onto dressed states");
  dressed->add_option("--config", config, "Configuration file")->required();
  dressed->add_option("--out", out_dir, "Output directory")->required();

  auto* check = app.add_subcommand("check", "Compare literal and derived right-hand sides");
  check->add_option("--config", config, "Configuration file")->required();
  check->add_option("--samples", samples, "Random states")
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "RNG seed");
  check->add_option("--time", check_time, "Evaluation time");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sweep->parsed() && preset_name.empty() && config.empty()) {
      throw CLI::RequiredError("sweep needs --preset or --config");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitValidation;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(config, mode, out_dir, false, out, err);
    }
    if (dressed->parsed()) {
      return cmd_simulate(config, "", out_dir, true, out, err);
    }
    if (sweep->parsed()) {
      return cmd_sweep(preset_name, config, out_dir, out, err);
    }
    return cmd_check(config, samples, seed, check_time, out, err);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace lambda_dem::cli
