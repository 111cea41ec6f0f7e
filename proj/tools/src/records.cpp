#include "qdev/cli/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qdev/errors.hpp"

namespace qdev::cli {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json to_json(const SpectrumRecord& r) {
  return {{"config_hash", r.config_hash},
          {"timestamp", r.timestamp},
          {"dimension", r.dimension},
          {"lambda_abs", r.lambda_abs},
          {"t_max", r.t_max},
          {"elements", r.elements},
          {"eigenvalues", r.eigenvalues},
          {"orthonormality_defect", r.orthonormality_defect},
          {"defect_tolerance", r.defect_tolerance},
          {"sign_changes", r.sign_changes},
          {"truncation_estimate", r.truncation_estimate},
          {"converged", r.converged}};
}

SpectrumRecord spectrum_from_json(const json& j) {
  SpectrumRecord r;
  try {
    r.config_hash = j.at("config_hash").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.dimension = j.at("dimension").get<int>();
    r.lambda_abs = j.at("lambda_abs").get<double>();
    r.t_max = j.at("t_max").get<double>();
    r.elements = j.at("elements").get<std::size_t>();
    r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    r.orthonormality_defect = j.at("orthonormality_defect").get<double>();
    r.defect_tolerance = j.at("defect_tolerance").get<double>();
    r.sign_changes = j.at("sign_changes").get<std::vector<std::size_t>>();
    r.truncation_estimate = j.at("truncation_estimate").get<double>();
    r.converged = j.at("converged").get<bool>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("spectrum record: ") + e.what());
  }
  return r;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

void export_spectrum(const SpectrumRecord& record, const std::string& path) {
  const bool ascending = std::is_sorted(record.eigenvalues.begin(), record.eigenvalues.end(),
                                        [](double a, double b) { return a <= b; }) &&
                         std::adjacent_find(record.eigenvalues.begin(), record.eigenvalues.end()) ==
                             record.eigenvalues.end();
  if (!ascending && record.converged) {
    throw ArgumentError("export_spectrum: eigenvalues not ascending in a converged record");
  }
  write_json(to_json(record), path);
}

SpectrumRecord read_spectrum(const std::string& path) { return spectrum_from_json(read_json(path)); }

}  // namespace qdev::cli
