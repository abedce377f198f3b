#include "lambda_dem/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace lambda_dem {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_series_csv(std::ostream& os, const Trajectory& traj,
                      const DemSeries& dem, const DressedSeries* dressed) {
  const std::size_t n = traj.samples.size();
  if (!dem.empty() && dem.size() != n) {
    throw std::invalid_argument("write_series_csv: DEM series misaligned");
  }
  if (dressed && dressed->samples.size() != n) {
    throw std::invalid_argument("write_series_csv: dressed series misaligned");
  }

  os << kSeriesHeader << '\n';
  std::string row;
  for (std::size_t i = 0; i < n; ++i) {
    const DensityMatrix& rho = traj.samples[i].state;
    row.clear();
    auto cell = [&](double x) {
      row += ',';
      row += format_real(x);
    };
    row += format_real(traj.samples[i].t);
    for (int k = 1; k <= 4; ++k) cell(rho.population(k));
    if (dem.empty()) {
      row += ',';
    } else {
      cell(dem[i].dem);
    }
    if (dressed) {
      for (double p : dressed->samples[i].pop) cell(p);
    } else {
      row += ",,,,";
    }
    for (int a = 1; a <= 4; ++a) {
      for (int b = a + 1; b <= 4; ++b) {
        const auto z = rho(a, b);
        cell(z.real());
        cell(z.imag());
      }
    }
    row += '\n';
    os << row;
  }
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

void write_series_csv(const std::filesystem::path& path,
                      const Trajectory& traj, const DemSeries& dem,
                      const DressedSeries* dressed) {
  auto out = open_for_write(path);
  write_series_csv(out, traj, dem, dressed);
  finish(out, path);
}

void write_sweep_summary_csv(std::ostream& os, const SweepResult& result) {
  os << "row," << to_string(result.spec.axis)
     << ",status,window_start,window_end,dem_mean,dem_std,steady,"
        "pA_mean,pB_mean,pC_mean,pD_mean,error\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& r = result.rows[i];
    os << i << ',' << axis_label(r.value) << ',' << (r.ok ? "ok" : "failed");
    if (r.steady) {
      const SteadySummary& s = *r.steady;
      os << ',' << format_real(s.t_window.first) << ','
         << format_real(s.t_window.second) << ',' << format_real(s.dem_mean)
         << ',' << format_real(s.dem_std) << ',' << (s.steady() ? 1 : 0);
      if (s.dressed_pops_mean) {
        for (double p : *s.dressed_pops_mean) os << ',' << format_real(p);
      } else {
        os << ",,,,";
      }
    } else {
      os << ",,,,,,,,,";
    }
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ' ';
    }
    os << ',' << err << '\n';
  }
}

void write_sweep_summary_csv(const std::filesystem::path& path,
                             const SweepResult& result) {
  auto out = open_for_write(path);
  write_sweep_summary_csv(out, result);
  finish(out, path);
}

}  // namespace lambda_dem
