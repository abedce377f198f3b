#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lambda_dem/dressed.hpp"
#include "lambda_dem/entanglement.hpp"
#include "lambda_dem/integrator.hpp"
#include "lambda_dem/sweep.hpp"

namespace lambda_dem {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header of every series file, in column order.
inline constexpr const char* kSeriesHeader =
    "t,rho11,rho22,rho33,rho44,dem,pA,pB,pC,pD,"
    "re_rho12,im_rho12,re_rho13,im_rho13,re_rho14,im_rho14,"
    "re_rho23,im_rho23,re_rho24,im_rho24,re_rho34,im_rho34";

/// 12 significant digits, "%.12g".
std::string format_real(double x);

/// Header plus one LF-terminated row per trajectory sample. `dem` must be
/// empty or sample-aligned with the trajectory; the dressed columns are left
/// empty when `dressed` is null.
void write_series_csv(std::ostream& os, const Trajectory& traj,
                      const DemSeries& dem,
                      const DressedSeries* dressed = nullptr);

void write_series_csv(const std::filesystem::path& path,
                      const Trajectory& traj, const DemSeries& dem,
                      const DressedSeries* dressed = nullptr);

/// One line per sweep row: value, status and the steady summary.
void write_sweep_summary_csv(std::ostream& os, const SweepResult& result);

void write_sweep_summary_csv(const std::filesystem::path& path,
                             const SweepResult& result);

}  // namespace lambda_dem
