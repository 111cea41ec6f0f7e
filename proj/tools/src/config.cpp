#include "qdev/cli/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qdev/errors.hpp"
#include "qdev/spatial/flatness.hpp"

namespace qdev::cli {

using nlohmann::json;

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

spatial::SpatialChart ChartDescriptor::build() const {
  return spatial::SpatialChart(dimension, metric, metric_decay, potential, potential_decay,
                               inner_radius);
}

namespace {

// Error raised while reading a key; load_config turns it into a line number.
struct KeyError : std::runtime_error {
  KeyError(std::string key_, const std::string& what) : std::runtime_error(what), key(std::move(key_)) {}
  std::string key;
};

json metric_json(const spatial::MetricDescriptor& d) {
  return {{"family", std::string(spatial::to_string(d.family))},
          {"amplitude", d.amplitude},
          {"exponent", d.exponent}};
}

json potential_json(const spatial::PotentialDescriptor& d) {
  return {{"family", std::string(spatial::to_string(d.family))},
          {"amplitude", d.amplitude},
          {"exponent", d.exponent}};
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw KeyError(where, where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      throw KeyError(key, "unknown key \"" + key + "\" in " + where);
    }
  }
}

template <class Descriptor, class FromString>
Descriptor read_descriptor(const json& j, const std::string& where, FromString from_string) {
  require_keys(j, {"family", "amplitude", "exponent"}, where);
  Descriptor d;
  try {
    d.family = from_string(j.at("family").get<std::string>());
  } catch (const qdev::ArgumentError& e) {
    throw KeyError("family", e.what());
  }
  d.amplitude = j.value("amplitude", 0.0);
  d.exponent = j.value("exponent", 0.0);
  return d;
}

ChartDescriptor read_chart(const json& j) {
  require_keys(j,
               {"dimension", "metric", "metric_decay", "potential", "potential_decay",
                "inner_radius"},
               "chart");
  ChartDescriptor c;
  c.dimension = j.value("dimension", 3);
  if (j.contains("metric")) {
    c.metric = read_descriptor<spatial::MetricDescriptor>(j["metric"], "metric",
                                                          spatial::metric_family_from_string);
  }
  if (j.contains("potential")) {
    c.potential = read_descriptor<spatial::PotentialDescriptor>(
        j["potential"], "potential", spatial::potential_family_from_string);
  }
  c.metric_decay = j.value("metric_decay", 1.0);
  c.potential_decay = j.value("potential_decay", 1.0);
  c.inner_radius = j.value("inner_radius", 0.0);
  return c;
}

template <class T>
std::function<void(const json&, RunConfig&)> field(T RunConfig::*member) {
  return [member](const json& v, RunConfig& c) { c.*member = v.get<T>(); };
}

const std::map<std::string, std::function<void(const json&, RunConfig&)>>& handlers() {
  static const std::map<std::string, std::function<void(const json&, RunConfig&)>> table{
      {"command", field(&RunConfig::command)},
      {"n", field(&RunConfig::n)},
      {"lambda_abs", field(&RunConfig::lambda_abs)},
      {"calibration", field(&RunConfig::calibration)},
      {"t_max", field(&RunConfig::t_max)},
      {"elements", field(&RunConfig::elements)},
      {"m", field(&RunConfig::m)},
      {"richardson", field(&RunConfig::richardson)},
      {"truncation_tolerance", field(&RunConfig::truncation_tolerance)},
      {"simplicity_gap", field(&RunConfig::simplicity_gap)},
      {"orthonormality_tolerance", field(&RunConfig::orthonormality_tolerance)},
      {"chart",
       [](const json& v, RunConfig& c) {
         if (v.is_string()) {
           c.chart = v.get<std::string>();
           c.chart_descriptor.reset();
         } else {
           c.chart_descriptor = read_chart(v);
         }
       }},
      {"probes", field(&RunConfig::probes)},
      {"plane_wave_points", field(&RunConfig::plane_wave_points)},
      {"k", field(&RunConfig::k)},
      {"radii", field(&RunConfig::radii)},
      {"width_ratio", field(&RunConfig::width_ratio)},
      {"weyl_count", field(&RunConfig::weyl_count)},
      {"index", field(&RunConfig::index)},
      {"levels", field(&RunConfig::levels)},
      {"spatial_factor", field(&RunConfig::spatial_factor)},
      {"lambda_values", field(&RunConfig::lambda_values)},
      {"dimensions", field(&RunConfig::dimensions)},
      {"max_tasks", field(&RunConfig::max_tasks)},
      {"output_dir", field(&RunConfig::output_dir)},
      {"timestamp", field(&RunConfig::timestamp)},
  };
  return table;
}

RunConfig apply_keys(const json& j, RunConfig base) {
  if (!j.is_object()) throw KeyError("", "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto it = handlers().find(key);
    if (it == handlers().end()) throw KeyError(key, "unknown key \"" + key + "\"");
    try {
      it->second(value, base);
    } catch (const json::exception& e) {
      throw KeyError(key, "key \"" + key + "\": " + e.what());
    }
  }
  return base;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  if (key.empty()) return 0;
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

json to_json(const RunConfig& c) {
  json j{
      {"command", c.command},
      {"n", c.n},
      {"lambda_abs", c.lambda_abs},
      {"calibration", c.calibration},
      {"t_max", c.t_max},
      {"elements", c.elements},
      {"m", c.m},
      {"richardson", c.richardson},
      {"truncation_tolerance", c.truncation_tolerance},
      {"simplicity_gap", c.simplicity_gap},
      {"orthonormality_tolerance", c.orthonormality_tolerance},
      {"probes", c.probes},
      {"plane_wave_points", c.plane_wave_points},
      {"k", c.k},
      {"radii", c.radii},
      {"width_ratio", c.width_ratio},
      {"weyl_count", c.weyl_count},
      {"index", c.index},
      {"levels", c.levels},
      {"spatial_factor", c.spatial_factor},
      {"lambda_values", c.lambda_values},
      {"dimensions", c.dimensions},
      {"max_tasks", c.max_tasks},
      {"output_dir", c.output_dir},
      {"timestamp", c.timestamp},
  };
  if (c.chart_descriptor) {
    const auto& d = *c.chart_descriptor;
    j["chart"] = {{"dimension", d.dimension},       {"metric", metric_json(d.metric)},
                  {"metric_decay", d.metric_decay}, {"potential", potential_json(d.potential)},
                  {"potential_decay", d.potential_decay}, {"inner_radius", d.inner_radius}};
  } else {
    j["chart"] = c.chart;
  }
  return j;
}

RunConfig from_json(const json& j, RunConfig base) {
  try {
    return apply_keys(j, std::move(base));
  } catch (const KeyError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
    throw ConfigError(std::string("malformed JSON: ") + e.what(), line);
  }
  try {
    return apply_keys(j, std::move(base));
  } catch (const KeyError& e) {
    throw ConfigError(e.what(), line_of_key(text, e.key));
  }
}

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands{"temporal-spectrum", "spatial-check", "quasimode",
                                                 "synthesize", "sweep"};
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    fail("command must be one of temporal-spectrum, spatial-check, quasimode, synthesize, sweep");
  }
  if (c.n < 3) fail("n must be >= 3");
  if (!(c.lambda_abs > 0.0) || !std::isfinite(c.lambda_abs)) fail("lambda_abs must be positive");
  if (!(c.t_max >= 0.0) || !std::isfinite(c.t_max)) fail("t_max must be >= 0");
  if (c.elements < 64 || c.elements % 2 != 0) fail("elements must be even and >= 64");
  if (c.m > c.elements / 8) fail("m must not exceed elements / 8");
  if (!in_open_unit(c.truncation_tolerance)) fail("truncation_tolerance must lie in (0, 1)");
  if (!in_open_unit(c.simplicity_gap)) fail("simplicity_gap must lie in (0, 1)");
  if (!in_open_unit(c.orthonormality_tolerance)) fail("orthonormality_tolerance must lie in (0, 1)");
  if (!c.probes.empty()) {
    if (c.probes.size() < 4) fail("probes needs at least 4 radii");
    for (std::size_t i = 0; i < c.probes.size(); ++i) {
      if (!(c.probes[i] > 0.0) || (i > 0 && !(c.probes[i] > c.probes[i - 1]))) {
        fail("probes must be positive and ascending");
      }
    }
  }
  if (c.plane_wave_points < 4 || c.plane_wave_points > 128) {
    fail("plane_wave_points must lie in [4, 128]");
  }
  if (!(c.k >= 0.0) || !std::isfinite(c.k)) fail("k must be >= 0");
  if (c.radii.empty()) fail("radii must not be empty");
  for (double r : c.radii) {
    if (!(r > 0.0) || !std::isfinite(r)) fail("radii must be positive");
  }
  if (!in_open_unit(c.width_ratio)) fail("width_ratio must lie in (0, 1)");
  if (c.weyl_count < 1 || c.weyl_count > 9) fail("weyl_count must lie in [1, 9]");
  if (c.levels < 2 || c.levels > 6) fail("levels must lie in [2, 6]");
  if (!(c.spatial_factor > 0.0) || !std::isfinite(c.spatial_factor)) {
    fail("spatial_factor must be positive");
  }
  if (c.lambda_values.empty() || c.dimensions.empty()) fail("sweep lists must not be empty");
  for (double l : c.lambda_values) {
    if (!(l > 0.0) || !std::isfinite(l)) fail("lambda_values must be positive");
  }
  for (int d : c.dimensions) {
    if (d < 3) fail("dimensions must be >= 3");
  }
  if (c.max_tasks < 1 || c.max_tasks > 64) fail("max_tasks must lie in [1, 64]");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
  try {
    (void)resolve_chart(c);
  } catch (const qdev::Error& e) {
    fail(std::string("chart: ") + e.what());
  }
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string config_hash(const RunConfig& config) {
  const std::string text = canonical_dump(to_json(config));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

spatial::SpatialChart resolve_chart(const RunConfig& config) {
  if (config.chart_descriptor) return config.chart_descriptor->build();
  if (config.chart == "flat") return spatial::SpatialChart::flat(config.n);
  for (auto& f : spatial::standard_fixtures()) {
    if (f.name == config.chart) return f.chart;
  }
  throw ArgumentError("unknown chart \"" + config.chart + "\"");
}

}  // namespace qdev::cli
