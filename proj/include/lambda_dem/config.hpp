#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lambda_dem/sweep.hpp"

namespace lambda_dem {

/// Parse failure with the 1-based line (0 when not tied to a line) and the
/// fully qualified key ("field.41.tau") it concerns.
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : ValidationError(what), line_(line), key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

struct SweepSection {
  SweepAxis axis = SweepAxis::Phi0;
  std::vector<AxisValue> values;
  std::optional<std::pair<double, double>> window;
  bool dressed = false;

  bool operator==(const SweepSection&) const = default;
};

/// Serialized run description. See docs/config-format.md for the format.
struct RunConfig {
  SimulationConfig sim = baseline_config();
  std::string output_prefix = "trajectory";
  std::optional<SweepSection> sweep;

  bool operator==(const RunConfig&) const = default;
};

/// Parses an INI-style document. An empty document yields the baseline
/// configuration. Unknown sections/keys, duplicates, malformed or
/// out-of-range values and parameter sets that fail validate() all throw
/// ConfigError.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Writes every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// The [sweep] section applied to the configuration as base.
SweepSpec to_sweep_spec(const RunConfig& cfg, std::string name);

}  // namespace lambda_dem
