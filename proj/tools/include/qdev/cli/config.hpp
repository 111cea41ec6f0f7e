#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdev/spatial/chart.hpp"

namespace qdev::cli {

/// Chart given inline instead of by fixture name.
struct ChartDescriptor {
  int dimension = 3;
  spatial::MetricDescriptor metric{};
  double metric_decay = 1.0;
  spatial::PotentialDescriptor potential{};
  double potential_decay = 1.0;
  double inner_radius = 0.0;

  spatial::SpatialChart build() const;
};

/// Everything a run depends on. Every field has a documented range, checked
/// by validate() before any computation.
struct RunConfig {
  std::string command;  // temporal-spectrum | spatial-check | quasimode | synthesize | sweep

  // temporal-spectrum, sweep
  int n = 3;                        // >= 3
  double lambda_abs = 1.0;          // > 0
  bool calibration = false;         // oscillator preset instead of (n, |Lambda|)
  double t_max = 0.0;               // 0 selects the automatic cutoff, otherwise > 0
  std::size_t elements = 2048;      // >= 64, even
  std::size_t m = 10;               // <= elements / 8
  bool richardson = true;
  double truncation_tolerance = 1e-10;  // (0, 1)
  double simplicity_gap = 1e-9;         // (0, 1)
  double orthonormality_tolerance = 1e-8;  // (0, 1)

  // spatial-check, quasimode
  std::string chart = "flat";  // fixture name or "flat"; ignored when chart_descriptor is set
  std::optional<ChartDescriptor> chart_descriptor;
  std::vector<double> probes;  // empty selects defaults
  std::size_t plane_wave_points = 16;  // per axis, >= 4

  // quasimode
  double k = 1.0;  // >= 0
  std::vector<double> radii{50, 100, 200, 400, 800};
  double width_ratio = 0.5;    // (0, 1)
  std::size_t weyl_count = 4;  // >= 1

  // synthesize
  std::size_t index = 0;
  std::size_t levels = 4;  // [2, 6]
  double spatial_factor = 1.0;  // > 0

  // sweep
  std::vector<double> lambda_values{0.5, 1.0, 2.0, 16.0};
  std::vector<int> dimensions{3, 4};
  std::size_t max_tasks = 2;  // >= 1

  std::string output_dir = "qdev_out";
  std::string timestamp;  // copied into records verbatim
};

/// Thrown for malformed or out-of-range configuration; `line` is 0 when the
/// problem is not tied to a file position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

nlohmann::json to_json(const RunConfig& config);
/// Rejects unknown keys and wrong types.
RunConfig from_json(const nlohmann::json& j, RunConfig base = {});
/// Parses a config file; diagnostics carry the line of the offending text.
RunConfig load_config(const std::string& path, RunConfig base = {});
/// Throws ConfigError for any field outside its range.
void validate(const RunConfig& config);

/// FNV-1a 64 of the canonical JSON form, as 16 lowercase hex digits.
std::string config_hash(const RunConfig& config);

/// Sorted keys, shortest round-trip numbers.
std::string canonical_dump(const nlohmann::json& j);

spatial::SpatialChart resolve_chart(const RunConfig& config);

}  // namespace qdev::cli
