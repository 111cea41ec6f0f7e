#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qdev::cli {

struct SpectrumRecord {
  std::string config_hash;
  std::string timestamp;
  int dimension = 0;      // 0 for the calibration preset
  double lambda_abs = 0.0;
  double t_max = 0.0;
  std::size_t elements = 0;
  std::vector<double> eigenvalues;
  double orthonormality_defect = 0.0;  // max |K(w_i, w_j) - delta_ij|
  double defect_tolerance = 0.0;
  std::vector<std::size_t> sign_changes;
  double truncation_estimate = 0.0;
  bool converged = false;

  bool operator==(const SpectrumRecord&) const = default;
};

nlohmann::json to_json(const SpectrumRecord& record);
SpectrumRecord spectrum_from_json(const nlohmann::json& j);

/// Writes canonical JSON plus a trailing newline. Throws ArgumentError for a
/// record that is neither ascending nor flagged, IoError when the file cannot be written.
void export_spectrum(const SpectrumRecord& record, const std::string& path);
SpectrumRecord read_spectrum(const std::string& path);

/// Canonical JSON of any value to a file, with a trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

}  // namespace qdev::cli
