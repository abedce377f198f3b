#include "lambda_dem/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lambda_dem {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Ctx {
  int line;
  std::string key;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + msg,
                      line, key);
  }

  double real(std::string_view v) const {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
      fail("expected a finite real, got '" + std::string(v) + "'");
    }
    return x;
  }
  double nonneg(std::string_view v) const {
    const double x = real(v);
    if (x < 0.0) fail("out of range: must be >= 0");
    return x;
  }
  double positive(std::string_view v) const {
    const double x = real(v);
    if (!(x > 0.0)) fail("out of range: must be > 0");
    return x;
  }
  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("expected true or false, got '" + std::string(v) + "'");
  }
};

using Setter = std::function<void(RunConfig&, std::string_view, const Ctx&)>;

std::map<std::string, Setter> build_setters() {
  std::map<std::string, Setter> s;
  auto decay = [&](const char* key, double DecayRates::*member) {
    s[std::string("decay.") + key] = [member](RunConfig& c, std::string_view v,
                                              const Ctx& ctx) {
      c.sim.params.decay.*member = ctx.nonneg(v);
    };
  };
  decay("gamma13", &DecayRates::gamma13);
  decay("gamma23", &DecayRates::gamma23);
  decay("gamma14", &DecayRates::gamma14);
  decay("gamma24", &DecayRates::gamma24);
  decay("Gamma12", &DecayRates::Gamma12);
  decay("Gamma13", &DecayRates::Gamma13);
  decay("Gamma14", &DecayRates::Gamma14);
  decay("Gamma23", &DecayRates::Gamma23);
  decay("Gamma24", &DecayRates::Gamma24);
  decay("Gamma34", &DecayRates::Gamma34);

  for (Transition tr : kTransitions) {
    const std::string sec = "field." + std::string(to_string(tr)) + ".";
    s[sec + "shape"] = [tr](RunConfig& c, std::string_view v, const Ctx& ctx) {
      if (v == "cw") {
        c.sim.params.field(tr).shape = Envelope::CW;
      } else if (v == "gaussian") {
        c.sim.params.field(tr).shape = Envelope::Gaussian;
      } else {
        ctx.fail("expected cw or gaussian");
      }
    };
    s[sec + "g0"] = [tr](RunConfig& c, std::string_view v, const Ctx& ctx) {
      c.sim.params.field(tr).g0 = ctx.nonneg(v);
    };
    s[sec + "detuning"] = [tr](RunConfig& c, std::string_view v,
                               const Ctx& ctx) {
      c.sim.params.field(tr).detuning = ctx.real(v);
    };
    s[sec + "tau"] = [tr](RunConfig& c, std::string_view v, const Ctx& ctx) {
      c.sim.params.field(tr).tau = ctx.positive(v);
    };
    s[sec + "t0"] = [tr](RunConfig& c, std::string_view v, const Ctx& ctx) {
      c.sim.params.field(tr).t0 = ctx.real(v);
    };
  }

  s["phase.phi0"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.params.phase.phi0 = ctx.real(v);
  };
  s["phase.Delta"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.params.phase.Delta = ctx.real(v);
  };
  s["phase.Kdotr"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.params.phase.Kdotr = ctx.real(v);
  };
  s["spatial.r"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.params.spatial.r = ctx.nonneg(v);
  };
  s["spatial.w"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.params.spatial.w = ctx.positive(v);
  };

  s["integrator.method"] = [](RunConfig& c, std::string_view v,
                              const Ctx& ctx) {
    if (v == "rk4") {
      c.sim.integrator.method = Method::RK4;
    } else if (v == "rk45") {
      c.sim.integrator.method = Method::RK45;
    } else {
      ctx.fail("expected rk4 or rk45");
    }
  };
  s["integrator.h"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.integrator.h = ctx.positive(v);
  };
  s["integrator.rtol"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    const double x = ctx.positive(v);
    if (x >= 1.0) ctx.fail("out of range: must be < 1");
    c.sim.integrator.rtol = x;
  };
  s["integrator.atol"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    c.sim.integrator.atol = ctx.nonneg(v);
  };
  s["integrator.t_start"] = [](RunConfig& c, std::string_view v,
                               const Ctx& ctx) {
    c.sim.integrator.t_start = ctx.real(v);
  };
  s["integrator.t_end"] = [](RunConfig& c, std::string_view v,
                             const Ctx& ctx) {
    c.sim.integrator.t_end = ctx.real(v);
  };
  s["integrator.sample_dt"] = [](RunConfig& c, std::string_view v,
                                 const Ctx& ctx) {
    c.sim.integrator.sample_dt = ctx.positive(v);
  };

  s["initial.level"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    int level = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), level);
    if (ec != std::errc() || ptr != v.data() + v.size() || level < 1 ||
        level > 4) {
      ctx.fail("out of range: level must be an integer in 1..4");
    }
    c.sim.initial_level = level;
  };

  s["run.mode"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    if (v == "derived") {
      c.sim.mode = RhsMode::Derived;
    } else if (v == "literal") {
      c.sim.mode = RhsMode::Literal;
    } else {
      ctx.fail("expected derived or literal");
    }
  };
  s["run.basis_policy"] = [](RunConfig& c, std::string_view v,
                             const Ctx& ctx) {
    if (v == "fixed_peak") {
      c.sim.basis_policy = BasisPolicy::FixedPeak;
    } else if (v == "instantaneous") {
      c.sim.basis_policy = BasisPolicy::Instantaneous;
    } else {
      ctx.fail("expected fixed_peak or instantaneous");
    }
  };

  s["output.prefix"] = [](RunConfig& c, std::string_view v, const Ctx& ctx) {
    if (v.empty() || v.find_first_of("/\\") != std::string_view::npos) {
      ctx.fail("prefix must be a non-empty file stem");
    }
    c.output_prefix = std::string(v);
  };

  auto sweep = [](RunConfig& c) -> SweepSection& {
    if (!c.sweep) c.sweep.emplace();
    return *c.sweep;
  };
  s["sweep.axis"] = [sweep](RunConfig& c, std::string_view v,
                            const Ctx& ctx) {
    try {
      sweep(c).axis = parse_axis(v);
    } catch (const ValidationError& e) {
      ctx.fail(e.what());
    }
  };
  // Kept as raw text until the axis is known; resolved after parsing.
  s["sweep.values"] = [sweep](RunConfig& c, std::string_view v,
                              const Ctx&) {
    auto& sw = sweep(c);
    sw.values.clear();
    std::string item;
    std::istringstream is{std::string(v)};
    while (std::getline(is, item, ',')) {
      sw.values.emplace_back(std::string(trim(item)));
    }
  };
  s["sweep.window_start"] = [sweep](RunConfig& c, std::string_view v,
                                    const Ctx& ctx) {
    auto& w = sweep(c).window;
    if (!w) w.emplace(0.0, 0.0);
    w->first = ctx.real(v);
  };
  s["sweep.window_end"] = [sweep](RunConfig& c, std::string_view v,
                                  const Ctx& ctx) {
    auto& w = sweep(c).window;
    if (!w) w.emplace(0.0, 0.0);
    w->second = ctx.real(v);
  };
  s["sweep.dressed"] = [sweep](RunConfig& c, std::string_view v,
                               const Ctx& ctx) {
    sweep(c).dressed = ctx.boolean(v);
  };
  return s;
}

const std::map<std::string, Setter>& setters() {
  static const auto s = build_setters();
  return s;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // key -> line
  std::string section;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto hash = raw.find_first_of("#;");
    std::string_view line = trim(raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                              ": malformed section header",
                          line_no, "");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                            ": expected 'key = value'",
                        line_no, "");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const std::string full =
        section.empty() ? std::string(key) : section + "." + std::string(key);
    const Ctx ctx{line_no, full};
    if (key.empty()) ctx.fail("empty key");

    const auto it = setters().find(full);
    if (it == setters().end()) ctx.fail("unknown key");
    if (auto [prev, inserted] = seen.emplace(full, line_no); !inserted) {
      ctx.fail("duplicate key (first set on line " +
               std::to_string(prev->second) + ")");
    }
    it->second(cfg, value, ctx);
  }

  // Unset coherence dampings follow the emission rates.
  DecayRates& d = cfg.sim.params.decay;
  auto unset = [&](const char* k) { return !seen.contains(std::string("decay.") + k); };
  if (unset("Gamma13")) d.Gamma13 = d.gamma13 + d.gamma23;
  if (unset("Gamma23")) d.Gamma23 = d.gamma13 + d.gamma23;
  if (unset("Gamma14")) d.Gamma14 = d.gamma14 + d.gamma24;
  if (unset("Gamma24")) d.Gamma24 = d.gamma14 + d.gamma24;
  if (unset("Gamma34")) d.Gamma34 = d.gamma3() + d.gamma4();
  if (!seen.contains("phase.Delta")) {
    cfg.sim.params.phase.Delta = cfg.sim.params.multiphoton_detuning();
  }

  if (cfg.sweep) {
    SweepSection& sw = *cfg.sweep;
    const int line = seen.contains("sweep.values") ? seen["sweep.values"] : 0;
    const Ctx ctx{line, "sweep.values"};
    if (!seen.contains("sweep.axis")) {
      throw ConfigError("[sweep] requires an axis", 0, "sweep.axis");
    }
    if (sw.values.empty()) ctx.fail("empty value list");
    if (sw.axis != SweepAxis::PulsedSet) {
      for (AxisValue& v : sw.values) v = ctx.real(std::get<std::string>(v));
    }
    if (sw.window && !(seen.contains("sweep.window_start") &&
                       seen.contains("sweep.window_end"))) {
      throw ConfigError("[sweep] window needs window_start and window_end", 0,
                        "sweep.window_start");
    }
    if (sw.window && !(sw.window->second > sw.window->first)) {
      throw ConfigError("[sweep] window_end must exceed window_start", 0,
                        "sweep.window_end");
    }
  }

  const ValidationReport report = validate(cfg.sim.params);
  for (const auto& issue : report.issues) {
    if (issue.severity == Severity::Error) {
      throw ConfigError(issue.key + ": " + issue.message, 0, issue.key);
    }
  }
  try {
    ensure_valid(cfg.sim.integrator);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what(), 0, "integrator");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string(), 0, "");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  const SystemParams& p = c.sim.params;
  const DecayRates& d = p.decay;
  auto kv = [&](const char* key, double v) {
    os << key << " = " << format_double(v) << '\n';
  };

  os << "[decay]\n";
  kv("gamma13", d.gamma13);
  kv("gamma23", d.gamma23);
  kv("gamma14", d.gamma14);
  kv("gamma24", d.gamma24);
  kv("Gamma12", d.Gamma12);
  kv("Gamma13", d.Gamma13);
  kv("Gamma14", d.Gamma14);
  kv("Gamma23", d.Gamma23);
  kv("Gamma24", d.Gamma24);
  kv("Gamma34", d.Gamma34);

  for (Transition tr : kTransitions) {
    const DriveField& f = p.field(tr);
    os << "\n[field." << to_string(tr) << "]\n";
    os << "shape = " << to_string(f.shape) << '\n';
    kv("g0", f.g0);
    kv("detuning", f.detuning);
    kv("tau", f.tau);
    kv("t0", f.t0);
  }

  os << "\n[phase]\n";
  kv("phi0", p.phase.phi0);
  kv("Delta", p.phase.Delta);
  kv("Kdotr", p.phase.Kdotr);

  os << "\n[spatial]\n";
  kv("r", p.spatial.r);
  kv("w", p.spatial.w);

  const IntegratorConfig& ic = c.sim.integrator;
  os << "\n[integrator]\n";
  os << "method = " << to_string(ic.method) << '\n';
  kv("h", ic.h);
  kv("rtol", ic.rtol);
  kv("atol", ic.atol);
  kv("t_start", ic.t_start);
  kv("t_end", ic.t_end);
  kv("sample_dt", ic.sample_dt);

  os << "\n[initial]\nlevel = " << c.sim.initial_level << '\n';
  os << "\n[run]\nmode = " << to_string(c.sim.mode) << '\n';
  os << "basis_policy = " << to_string(c.sim.basis_policy) << '\n';
  os << "\n[output]\nprefix = " << c.output_prefix << '\n';

  if (c.sweep) {
    const SweepSection& sw = *c.sweep;
    os << "\n[sweep]\naxis = " << to_string(sw.axis) << '\n';
    os << "values = ";
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      if (i) os << ", ";
      if (const auto* s = std::get_if<std::string>(&sw.values[i])) {
        os << *s;
      } else {
        os << format_double(std::get<double>(sw.values[i]));
      }
    }
    os << '\n';
    if (sw.window) {
      kv("window_start", sw.window->first);
      kv("window_end", sw.window->second);
    }
    os << "dressed = " << (sw.dressed ? "true" : "false") << '\n';
  }
  return os.str();
}

SweepSpec to_sweep_spec(const RunConfig& cfg, std::string name) {
  if (!cfg.sweep) {
    throw ValidationError("configuration has no [sweep] section");
  }
  SweepSpec spec;
  spec.name = std::move(name);
  spec.base = cfg.sim;
  spec.axis = cfg.sweep->axis;
  spec.values = cfg.sweep->values;
  spec.outputs.dressed_series = cfg.sweep->dressed;
  spec.window = cfg.sweep->window;
  return spec;
}

}  // namespace lambda_dem
