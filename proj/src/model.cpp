#include "lambda_dem/model.hpp"

#include <sstream>

namespace lambda_dem {

std::string_view to_string(Transition tr) {
  switch (tr) {
    case Transition::T31: return "31";
    case Transition::T32: return "32";
    case Transition::T41: return "41";
    case Transition::T42: return "42";
  }
  return "?";
}

std::string_view to_string(Envelope shape) {
  return shape == Envelope::CW ? "cw" : "gaussian";
}

DecayRates DecayRates::from_emission(double g13, double g23, double g14,
                                     double g24, double ground_dephasing) {
  DecayRates d;
  d.gamma13 = g13;
  d.gamma23 = g23;
  d.gamma14 = g14;
  d.gamma24 = g24;
  d.Gamma12 = ground_dephasing;
  d.Gamma13 = g13 + g23;
  d.Gamma23 = g13 + g23;
  d.Gamma14 = g14 + g24;
  d.Gamma24 = g14 + g24;
  d.Gamma34 = g13 + g23 + g14 + g24;
  return d;
}

SystemParams::SystemParams() {
  for (Transition tr : kTransitions) field(tr).transition = tr;
}

double SystemParams::multiphoton_detuning() const {
  return (detuning(Transition::T32) + detuning(Transition::T41)) -
         (detuning(Transition::T31) + detuning(Transition::T42));
}

double rabi_envelope(const DriveField& field, const SpatialConfig& spatial,
                     double t) {
  if (field.shape == Envelope::CW) return field.g0;
  const double s = (t - field.t0) / field.tau;
  const double rw = spatial.r / spatial.w;
  return field.g0 * std::exp(-rw * rw - s * s);
}

double relative_phase(const PhaseConfig& phase, double t) {
  return phase.Delta * t - phase.Kdotr + phase.phi0;
}

bool ValidationReport::has_errors() const { return error_count() > 0; }

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& i : issues) n += i.severity == Severity::Error;
  return n;
}

std::size_t ValidationReport::warning_count() const {
  return issues.size() - error_count();
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues) {
    os << (i.severity == Severity::Error ? "error: " : "warning: ") << i.key
       << ": " << i.message << '\n';
  }
  return os.str();
}

ValidationReport validate(const SystemParams& params) {
  ValidationReport report;
  auto error = [&](std::string key, std::string msg) {
    report.issues.push_back({Severity::Error, std::move(key), std::move(msg)});
  };
  auto warn = [&](std::string key, std::string msg) {
    report.issues.push_back(
        {Severity::Warning, std::move(key), std::move(msg)});
  };

  const DecayRates& d = params.decay;
  const std::pair<const char*, double> rates[] = {
      {"gamma13", d.gamma13}, {"gamma23", d.gamma23}, {"gamma14", d.gamma14},
      {"gamma24", d.gamma24}, {"Gamma12", d.Gamma12}, {"Gamma13", d.Gamma13},
      {"Gamma14", d.Gamma14}, {"Gamma23", d.Gamma23}, {"Gamma24", d.Gamma24},
      {"Gamma34", d.Gamma34}};
  for (const auto& [key, value] : rates) {
    if (!std::isfinite(value)) {
      error(key, "non-finite decay rate");
    } else if (value < 0.0) {
      error(key, "negative decay rate");
    }
  }

  for (const DriveField& f : params.fields) {
    const std::string prefix = "field." + std::string(to_string(f.transition));
    if (!std::isfinite(f.g0) || f.g0 < 0.0) {
      error(prefix + ".g0", "Rabi frequency must be finite and >= 0");
    }
    if (!std::isfinite(f.detuning)) {
      error(prefix + ".detuning", "non-finite detuning");
    }
    if (f.shape == Envelope::Gaussian) {
      if (!(f.tau > 0.0) || !std::isfinite(f.tau)) {
        error(prefix + ".tau", "pulse width must be > 0");
      }
      if (!std::isfinite(f.t0)) error(prefix + ".t0", "non-finite pulse center");
    }
  }

  if (!std::isfinite(params.spatial.r) || params.spatial.r < 0.0) {
    error("spatial.r", "radial coordinate must be >= 0");
  }
  if (!(params.spatial.w > 0.0) || !std::isfinite(params.spatial.w)) {
    error("spatial.w", "beam waist must be > 0");
  }

  const PhaseConfig& ph = params.phase;
  if (!std::isfinite(ph.phi0) || !std::isfinite(ph.Delta) ||
      !std::isfinite(ph.Kdotr)) {
    error("phase", "non-finite phase parameter");
  } else {
    const double implied = params.multiphoton_detuning();
    if (std::abs(implied - ph.Delta) > 1e-12 * (1.0 + std::abs(ph.Delta))) {
      error("phase.Delta",
            "inconsistent with field detunings (D32 + D41) - (D31 + D42)");
    }
    if (ph.Delta != 0.0) {
      warn("phase.Delta", "beyond multiphoton resonance; results unvalidated");
    }
    if (ph.Kdotr != 0.0) {
      warn("phase.Kdotr", "phase mismatch K.r != 0; results unvalidated");
    }
  }
  return report;
}

void ensure_valid(const SystemParams& params) {
  const ValidationReport report = validate(params);
  if (report.has_errors()) throw ValidationError(report.to_string());
}

namespace {

// Packed layout: rho11, rho22, rho33, then (re, im) of
// rho12, rho13, rho14, rho23, rho24, rho34.
constexpr int kOffset[4][4] = {
    {-1, 3, 5, 7}, {-1, -1, 9, 11}, {-1, -1, -1, 13}, {-1, -1, -1, -1}};

}  // namespace

int coherence_offset(int i, int j) { return kOffset[i][j]; }

StateVector pack(const Matrix4cd& m) {
  StateVector v;
  for (int k = 0; k < 3; ++k) v(k) = m(k, k).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      v(kOffset[i][j]) = m(i, j).real();
      v(kOffset[i][j] + 1) = m(i, j).imag();
    }
  }
  return v;
}

namespace {

Matrix4cd unpack(const StateVector& v, double d44) {
  Matrix4cd m;
  for (int k = 0; k < 3; ++k) m(k, k) = v(k);
  m(3, 3) = d44;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const std::complex<double> z(v(kOffset[i][j]), v(kOffset[i][j] + 1));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

}  // namespace

Matrix4cd unpack_derivative(const StateVector& v) {
  return unpack(v, -(v(0) + v(1) + v(2)));
}

DensityMatrix::DensityMatrix() : packed_(StateVector::Zero()) {
  packed_(0) = 1.0;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix4cd& m) {
  return DensityMatrix(pack(m));
}

DensityMatrix DensityMatrix::pure_level(int level) {
  if (level < 1 || level > 4) {
    throw ValidationError("pure_level: level must be in 1..4");
  }
  StateVector v = StateVector::Zero();
  if (level < 4) v(level - 1) = 1.0;
  return DensityMatrix(v);
}

DensityMatrix DensityMatrix::maximally_mixed() {
  StateVector v = StateVector::Zero();
  v(0) = v(1) = v(2) = 0.25;
  return DensityMatrix(v);
}

double DensityMatrix::population(int level) const {
  if (level == 4) return 1.0 - packed_(0) - packed_(1) - packed_(2);
  return packed_(level - 1);
}

std::complex<double> DensityMatrix::operator()(int i, int j) const {
  if (i == j) return population(i);
  const int a = std::min(i, j) - 1;
  const int b = std::max(i, j) - 1;
  const std::complex<double> z(packed_(kOffset[a][b]),
                               packed_(kOffset[a][b] + 1));
  return i < j ? z : std::conj(z);
}

Matrix4cd DensityMatrix::matrix() const { return unpack(packed_, population(4)); }

}  // namespace lambda_dem
