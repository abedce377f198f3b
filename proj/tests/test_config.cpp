#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "lambda_dem/config.hpp"

using namespace lambda_dem;

namespace {

const char* kFig2Doc = R"(# baseline with a phase sweep
[decay]
gamma13 = 1
gamma23 = 1
gamma14 = 1
gamma24 = 1
Gamma12 = 1

[field.41]
shape = gaussian
g0 = 3
tau = 20   ; pulse width
t0 = 0

[phase]
phi0 = 0

[integrator]
method = rk4
h = 1e-3
t_end = 100

[output]
prefix = fig2

[sweep]
axis = phi0
values = 0, 1.5707963267948966, 3.141592653589793
)";

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", 0, "");
}

RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::uniform_int_distribution<int> coin(0, 1);
  RunConfig c;
  DecayRates& d = c.sim.params.decay;
  for (double* x : {&d.gamma13, &d.gamma23, &d.gamma14, &d.gamma24, &d.Gamma12,
                    &d.Gamma13, &d.Gamma14, &d.Gamma23, &d.Gamma24, &d.Gamma34}) {
    *x = u(rng);
  }
  for (auto& f : c.sim.params.fields) {
    f.shape = coin(rng) ? Envelope::Gaussian : Envelope::CW;
    f.g0 = u(rng);
    f.detuning = u(rng) - 2.5;
    f.tau = 0.1 + u(rng);
    f.t0 = u(rng) - 2.5;
  }
  c.sim.params.phase.phi0 = u(rng) * 1.3;
  c.sim.params.phase.Delta = c.sim.params.multiphoton_detuning();
  c.sim.params.phase.Kdotr = u(rng) - 2.5;
  c.sim.params.spatial = {u(rng), 0.5 + u(rng)};
  c.sim.integrator.method = coin(rng) ? Method::RK45 : Method::RK4;
  c.sim.integrator.h = 1e-4 * (1 + u(rng));
  c.sim.integrator.rtol = 1e-9 * (1 + u(rng));
  c.sim.integrator.atol = 1e-12 * u(rng);
  c.sim.integrator.t_start = -u(rng);
  c.sim.integrator.t_end = 1 + u(rng);
  c.sim.integrator.sample_dt = 0.01 + u(rng) / 10;
  c.sim.initial_level = 1 + coin(rng) * 2 + coin(rng);
  c.sim.mode = coin(rng) ? RhsMode::Literal : RhsMode::Derived;
  c.sim.basis_policy = coin(rng) ? BasisPolicy::Instantaneous : BasisPolicy::FixedPeak;
  c.output_prefix = "run" + std::to_string(rng() % 1000);
  if (coin(rng)) {
    SweepSection sw;
    if (coin(rng)) {
      sw.axis = SweepAxis::PulsedSet;
      sw.values = {std::string("41"), std::string("31+32"), std::string("none")};
    } else {
      sw.axis = SweepAxis::G42;
      sw.values = {u(rng), u(rng) / 3};
    }
    if (coin(rng)) sw.window = std::pair{0.5, 0.75};
    sw.dressed = coin(rng);
    c.sweep = sw;
  }
  return c;
}

}  // namespace

TEST_CASE("parse_config: empty document is the baseline") {
  const RunConfig c = parse_config("");
  CHECK(c.sim == baseline_config());
  CHECK(c.output_prefix == "trajectory");
  CHECK_FALSE(c.sweep);
  CHECK(parse_config("# only a comment\n\n").sim == baseline_config());
}

TEST_CASE("parse_config: the fig2 document parses cleanly") {
  const RunConfig c = parse_config(kFig2Doc);
  CHECK(c.sim == baseline_config());
  CHECK(c.output_prefix == "fig2");
  REQUIRE(c.sweep);
  CHECK(c.sweep->axis == SweepAxis::Phi0);
  REQUIRE(c.sweep->values.size() == 3);
  CHECK(std::get<double>(c.sweep->values[2]) == std::numbers::pi);
  CHECK_FALSE(c.sweep->window);

  const SweepSpec spec = to_sweep_spec(c, "fig2");
  CHECK(spec.values == preset("fig2").values);
  CHECK(spec.base == preset("fig2").base);
}

TEST_CASE("parse_config: out-of-range value names the key") {
  const ConfigError e = parse_error("[field.41]\ntau = -5\n");
  CHECK(e.key() == "field.41.tau");
  CHECK(e.line() == 2);
  CHECK(std::string(e.what()).find("field.41.tau") != std::string::npos);
  CHECK(std::string(e.what()).find("out of range") != std::string::npos);
}

TEST_CASE("parse_config: rejected documents") {
  CHECK(parse_error("[decay]\ngamma99 = 1\n").key() == "decay.gamma99");
  CHECK(parse_error("[phase]\nphi0 = 1\nphi0 = 2\n").line() == 3);
  CHECK(parse_error("[phase]\nphi0 = abc\n").key() == "phase.phi0");
  CHECK(parse_error("[phase\n").line() == 1);
  CHECK(parse_error("[phase]\nphi0\n").line() == 2);
  CHECK(parse_error("[field.41]\nshape = square\n").key() == "field.41.shape");
  CHECK(parse_error("[initial]\nlevel = 5\n").key() == "initial.level");
  CHECK(parse_error("[integrator]\nrtol = 2\n").key() == "integrator.rtol");
  CHECK(parse_error("[output]\nprefix = a/b\n").key() == "output.prefix");
  CHECK(parse_error("[sweep]\nvalues = 1, 2\n").key() == "sweep.axis");
  CHECK(parse_error("[sweep]\naxis = g41\nvalues = 1, x\n").key() == "sweep.values");
  CHECK(parse_error("[sweep]\naxis = g41\nvalues = 1\nwindow_start = 3\n").key() ==
        "sweep.window_start");
  // a consistent Delta must accompany detuned fields
  CHECK(parse_error("[field.31]\ndetuning = 1\n[phase]\nDelta = 0\n").key() ==
        "phase.Delta");
  CHECK(parse_error("[integrator]\nt_end = -1\n").key() == "integrator");
}

TEST_CASE("parse_config: unset dampings follow the emission rates") {
  const RunConfig c = parse_config("[decay]\ngamma13 = 2\ngamma24 = 0.5\n");
  const DecayRates& d = c.sim.params.decay;
  CHECK(d.Gamma13 == 3.0);
  CHECK(d.Gamma23 == 3.0);
  CHECK(d.Gamma14 == 1.5);
  CHECK(d.Gamma34 == 4.5);
  CHECK(d.Gamma12 == 1.0);
  CHECK(parse_config("[decay]\nGamma34 = 7\n").sim.params.decay.Gamma34 == 7.0);
}

TEST_CASE("parse_config: Delta follows the detunings when unset") {
  const RunConfig c = parse_config("[field.41]\ndetuning = 0.5\n");
  CHECK(c.sim.params.phase.Delta == 0.5);
  CHECK(validate(c.sim.params).warning_count() == 1);
}

TEST_CASE("serialize_config round-trips") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const RunConfig c = random_config(rng);
    const std::string text = serialize_config(c);
    CAPTURE(text);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("load_config reads files") {
  const auto path = std::filesystem::temp_directory_path() / "lambda_dem_test_config.ini";
  {
    std::ofstream(path) << kFig2Doc;
  }
  CHECK(load_config(path) == parse_config(kFig2Doc));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}

TEST_CASE("to_sweep_spec needs a sweep section") {
  CHECK_THROWS_AS(to_sweep_spec(parse_config(""), "x"), ValidationError);
}

TEST_CASE("shipped example configs parse") {
  const auto dir = std::filesystem::path(LAMBDA_DEM_TEST_DATA_DIR) / ".." / "configs";
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_config(entry.path()));
    ++n;
  }
  CHECK(n >= 1);
  RunConfig base = load_config(dir / "baseline.ini");
  CHECK(base.sim == baseline_config());
  CHECK(base.output_prefix == "baseline");
}
