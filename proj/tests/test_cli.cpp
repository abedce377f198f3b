#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lambda_dem/csv.hpp"

namespace fs = std::filesystem;
using namespace lambda_dem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lambda_dem");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("lambda_dem_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char* kShort = "[integrator]\nmethod = rk45\nt_end = 1\nsample_dt = 0.1\n"
                     "[output]\nprefix = short\n";

}  // namespace

TEST_CASE("cli: version and help") {
  const Run v = run({"--version"});
  CHECK(v.code == cli::kExitOk);
  CHECK(v.out.find(LAMBDA_DEM_VERSION) != std::string::npos);
  const Run h = run({"--help"});
  CHECK(h.code == cli::kExitOk);
  CHECK(h.out.find("simulate") != std::string::npos);
  CHECK(h.out.find("check") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 1") {
  CHECK(run({}).code == cli::kExitValidation);
  CHECK(run({"frobnicate"}).code == cli::kExitValidation);
  CHECK(run({"simulate", "--out", "x"}).code == cli::kExitValidation);
  CHECK(run({"sweep", "--out", "x"}).code == cli::kExitValidation);
  CHECK(run({"sweep", "--preset", "fig9", "--out", "x"}).code == cli::kExitValidation);
  CHECK(run({"check", "--config", "x", "--samples", "0"}).code == cli::kExitValidation);
}

TEST_CASE("cli: simulate writes a series file") {
  TempDir dir;
  const std::string cfg = dir.write("short.ini", kShort);
  const fs::path out = dir.path() / "out";
  const Run r = run({"simulate", "--config", cfg, "--out", out.string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.err.empty());
  const std::string csv = slurp(out / "short.csv");
  CHECK(csv.starts_with(kSeriesHeader));
  CHECK(line_count(csv) == 12);
  CHECK(r.out.find("short.csv") != std::string::npos);

  SUBCASE("literal mode matches derived at phi0 = 0") {
    const Run lit = run({"simulate", "--config", cfg, "--mode", "literal", "--out",
                         (dir.path() / "lit").string()});
    CHECK(lit.code == cli::kExitOk);
    // phi0 = 0 at the baseline, so the two right-hand sides coincide
    CHECK(slurp(dir.path() / "lit" / "short.csv") == csv);
  }
}

TEST_CASE("cli: validation failures exit 1") {
  TempDir dir;
  const Run missing = run({"simulate", "--config", (dir.path() / "nope.ini").string(),
                           "--out", dir.path().string()});
  CHECK(missing.code == cli::kExitValidation);

  const std::string bad = dir.write("bad.ini", "[field.41]\ntau = -5\n");
  const Run r = run({"simulate", "--config", bad, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("field.41.tau") != std::string::npos);
}

TEST_CASE("cli: runtime failures exit 2") {
  TempDir dir;
  const std::string cfg = dir.write(
      "blowup.ini", "[decay]\ngamma13 = 1e300\ngamma23 = 1e300\n[integrator]\nt_end = 1\n");
  const Run r = run({"simulate", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitRuntime);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("cli: warnings go to stderr") {
  TempDir dir;
  const std::string cfg =
      dir.write("detuned.ini", std::string(kShort) + "[field.41]\ndetuning = 0.5\n");
  const Run r = run({"simulate", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.err.find("beyond multiphoton resonance") != std::string::npos);
}

TEST_CASE("cli: dressed writes a projected series") {
  TempDir dir;
  const std::string cfg = dir.write(
      "d.ini", std::string(kShort) +
                   "[field.31]\ng0 = 0\n[field.32]\ng0 = 0\n[field.41]\nshape = cw\n");
  const Run r = run({"dressed", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitOk);
  const std::string csv = slurp(dir.path() / "short_dressed.csv");
  REQUIRE(line_count(csv) == 12);
  // dressed columns are filled
  CHECK(csv.find(",,") == std::string::npos);
}

TEST_CASE("cli: sweep from a config") {
  TempDir dir;
  const std::string cfg = dir.write(
      "sw.ini", std::string(kShort) + "[sweep]\naxis = g41\nvalues = 1, 2\n");
  const Run r = run({"sweep", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(dir.path() / "short_g41_1.csv"));
  CHECK(fs::exists(dir.path() / "short_g41_2.csv"));
  const std::string summary = slurp(dir.path() / "short_summary.csv");
  CHECK(line_count(summary) == 3);
  CHECK(summary.find(",ok,") != std::string::npos);
  CHECK(r.out.find("steady DEM") != std::string::npos);

  CHECK(run({"sweep", "--config", dir.write("nosweep.ini", kShort), "--out",
             dir.path().string()})
            .code == cli::kExitValidation);
}

TEST_CASE("cli: a failing sweep row exits 2 but writes the rest") {
  TempDir dir;
  const std::string cfg = dir.write(
      "sw.ini", std::string(kShort) + "[sweep]\naxis = g41\nvalues = 2, -1\n");
  const Run r = run({"sweep", "--config", cfg, "--out", dir.path().string()});
  CHECK(r.code == cli::kExitRuntime);
  CHECK(fs::exists(dir.path() / "short_g41_2.csv"));
  CHECK(r.err.find("row 1") != std::string::npos);
  CHECK(slurp(dir.path() / "short_summary.csv").find(",failed,") != std::string::npos);
}

TEST_CASE("cli: check reports the rho12 discrepancy") {
  TempDir dir;
  const std::string cfg = dir.write("phase.ini", "[phase]\nphi0 = 1.5707963267948966\n");
  const Run r = run({"check", "--config", cfg, "--samples", "20", "--seed", "3"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("differing components: rho12\n") != std::string::npos);
  CHECK(r.out.find("(fully explained)") != std::string::npos);
}

TEST_CASE("cli: check with every coupling off reports zero") {
  TempDir dir;
  const std::string cfg = dir.write(
      "off.ini", "[field.31]\ng0 = 0\n[field.32]\ng0 = 0\n[field.41]\ng0 = 0\n[field.42]\ng0 = 0\n");
  const Run r = run({"check", "--config", cfg});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("overall max|diff| = 0.000000e+00") != std::string::npos);
  CHECK(r.out.find("no component differs") != std::string::npos);
}
