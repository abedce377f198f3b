#include "lambda_dem/liouvillian.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "lambda_dem/random.hpp"

namespace lambda_dem {

std::string_view to_string(RhsMode mode) {
  return mode == RhsMode::Literal ? "literal" : "derived";
}

Matrix4cd rhs_literal(const DensityMatrix& rho, const SystemParams& params,
                      double t) {
  return rhs_literal<double>(rho.matrix(), params, Drive::at(params, t));
}

Matrix4cd rhs_derived(const DensityMatrix& rho, const SystemParams& params,
                      double t) {
  return rhs_derived<double>(rho.matrix(), params, Drive::at(params, t));
}

StateVector packed_rhs(RhsMode mode, const StateVector& state,
                       const SystemParams& params, double t) {
  const Matrix4cd r = DensityMatrix(state).matrix();
  return pack(rhs<double>(mode, r, params, Drive::at(params, t)));
}

namespace {

constexpr int kRow[9] = {0, 1, 2, 0, 0, 0, 1, 1, 2};
constexpr int kCol[9] = {0, 1, 2, 1, 2, 3, 2, 3, 3};

}  // namespace

std::vector<std::string> RhsComparison::differing(double tol) const {
  std::vector<std::string> out;
  for (int k = 0; k < 9; ++k) {
    if (max_abs_diff[k] > tol) out.emplace_back(kComponentNames[k]);
  }
  return out;
}

std::string RhsComparison::to_string(double tol) const {
  std::ostringstream os;
  char buf[128];
  os << "literal vs derived right-hand side, " << samples
     << " random states, t = " << t << '\n';
  for (int k = 0; k < 9; ++k) {
    std::snprintf(buf, sizeof buf, "  d%-6s max|diff| = %.6e%s\n",
                  kComponentNames[k], max_abs_diff[k],
                  max_abs_diff[k] > tol ? "  DIFFERS" : "");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "  overall max|diff| = %.6e (tolerance %.1e)\n",
                max_abs, tol);
  os << buf;
  const auto diff = differing(tol);
  if (diff.empty()) {
    os << "  no component differs\n";
  } else {
    os << "  differing components:";
    for (const auto& name : diff) os << ' ' << name;
    os << '\n';
  }
  std::snprintf(buf, sizeof buf,
                "  rho12 residual after removing the e^{-i Phi} factor on "
                "g42 rho14: %.6e%s\n",
                rho12_unexplained,
                rho12_unexplained <= tol ? " (fully explained)" : "");
  os << buf;
  return os.str();
}

RhsComparison compare_rhs(const SystemParams& params, double t, int n_samples,
                          std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  RhsComparison cmp;
  cmp.samples = n_samples;
  cmp.t = t;
  const Drive drive = Drive::at(params, t);
  const std::complex<double> I(0, 1);
  const std::complex<double> phase_defect =
      std::polar(1.0, -drive.phi) - 1.0;

  std::mt19937_64 rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    const Matrix4cd rho = random_density_matrix(rng);
    const Matrix4cd lit = rhs_literal<double>(rho, params, drive);
    const Matrix4cd der = rhs_derived<double>(rho, params, drive);
    for (int k = 0; k < 9; ++k) {
      const double d = std::abs(lit(kRow[k], kCol[k]) - der(kRow[k], kCol[k]));
      cmp.max_abs_diff[k] = std::max(cmp.max_abs_diff[k], d);
    }
    const std::complex<double> expected =
        -I * drive.g42 * rho(0, 3) * phase_defect;
    cmp.rho12_unexplained = std::max(
        cmp.rho12_unexplained, std::abs(lit(0, 1) - der(0, 1) - expected));
  }
  cmp.max_abs =
      *std::max_element(cmp.max_abs_diff.begin(), cmp.max_abs_diff.end());
  return cmp;
}

double rhs_discrepancy(const SystemParams& params, double t, int n_samples,
                       std::uint64_t seed) {
  return compare_rhs(params, t, n_samples, seed).max_abs;
}

}  // namespace lambda_dem
