#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdev/cli/app.hpp"
#include "qdev/cli/config.hpp"
#include "qdev/cli/csv.hpp"
#include "qdev/cli/plot.hpp"
#include "qdev/cli/records.hpp"
#include "qdev/errors.hpp"
#include "qdev/temporal/problem.hpp"
#include "shooting.hpp"

namespace fs = std::filesystem;
using namespace qdev;
using namespace qdev::cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("QDEV_TEST_TMP");
  const fs::path root = env && *env ? fs::path(env) : fs::temp_directory_path() / "qdev_cli_test";
  const fs::path p = root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::size_t count_of(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("config survives a JSON round trip") {
  RunConfig c;
  c.command = "quasimode";
  c.k = 0.75;
  c.radii = {10.0, 20.5};
  c.probes = {8, 16, 32, 64};
  c.timestamp = "2026-01-01T00:00:00Z";
  CHECK(to_json(from_json(to_json(c))) == to_json(c));

  ChartDescriptor d;
  d.metric = {spatial::MetricFamily::conformal_power, 1.0, 1.0};
  d.potential = {spatial::PotentialFamily::lorentzian, 1.0, 0.0};
  d.potential_decay = 2.0;
  d.inner_radius = 4.0;
  c.chart_descriptor = d;
  const RunConfig back = from_json(to_json(c));
  REQUIRE(back.chart_descriptor.has_value());
  CHECK(back.chart_descriptor->inner_radius == 4.0);
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("config hash tracks every field") {
  RunConfig base;
  base.command = "temporal-spectrum";
  CHECK(config_hash(base) == config_hash(RunConfig(base)));
  CHECK(config_hash(base).size() == 16);
  const std::vector<std::function<void(RunConfig&)>> edits{
      [](RunConfig& c) { c.command = "sweep"; },
      [](RunConfig& c) { c.n = 4; },
      [](RunConfig& c) { c.lambda_abs = 2.0; },
      [](RunConfig& c) { c.calibration = true; },
      [](RunConfig& c) { c.t_max = 9.0; },
      [](RunConfig& c) { c.elements = 1024; },
      [](RunConfig& c) { c.m = 4; },
      [](RunConfig& c) { c.richardson = false; },
      [](RunConfig& c) { c.truncation_tolerance = 1e-9; },
      [](RunConfig& c) { c.simplicity_gap = 1e-8; },
      [](RunConfig& c) { c.orthonormality_tolerance = 1e-9; },
      [](RunConfig& c) { c.chart = "oscillating"; },
      [](RunConfig& c) { c.probes = {10, 20, 40, 80}; },
      [](RunConfig& c) { c.plane_wave_points = 32; },
      [](RunConfig& c) { c.k = 2.0; },
      [](RunConfig& c) { c.radii = {50}; },
      [](RunConfig& c) { c.width_ratio = 0.25; },
      [](RunConfig& c) { c.weyl_count = 3; },
      [](RunConfig& c) { c.index = 1; },
      [](RunConfig& c) { c.levels = 3; },
      [](RunConfig& c) { c.spatial_factor = 2.0; },
      [](RunConfig& c) { c.lambda_values = {1.0}; },
      [](RunConfig& c) { c.dimensions = {5}; },
      [](RunConfig& c) { c.max_tasks = 1; },
      [](RunConfig& c) { c.output_dir = "elsewhere"; },
      [](RunConfig& c) { c.timestamp = "t"; },
      [](RunConfig& c) { c.chart_descriptor = ChartDescriptor{}; },
  };
  for (std::size_t i = 0; i < edits.size(); ++i) {
    RunConfig c = base;
    edits[i](c);
    CAPTURE(i);
    CHECK(config_hash(c) != config_hash(base));
  }
}

TEST_CASE("config files report the offending line") {
  const auto dir = scratch("config_lines");
  write_text(dir / "unknown.json", "{\n  \"n\": 3,\n  \"lamda_abs\": 2.0\n}\n");
  try {
    load_config((dir / "unknown.json").string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
  write_text(dir / "typed.json", "{\n  \"n\": 3,\n  \"m\": 4,\n  \"k\": \"fast\"\n}\n");
  try {
    load_config((dir / "typed.json").string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
  }
  write_text(dir / "broken.json", "{\n  \"n\": 3,\n  \"m\": ,\n}\n");
  try {
    load_config((dir / "broken.json").string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), IoError);
  CHECK(run({"temporal-spectrum", "--config", (dir / "unknown.json").string()}) == kValidationFailure);
}

TEST_CASE("validation enforces documented ranges") {
  RunConfig ok;
  ok.command = "temporal-spectrum";
  CHECK_NOTHROW(validate(ok));
  const std::vector<std::function<void(RunConfig&)>> bad{
      [](RunConfig& c) { c.command = "plot"; },
      [](RunConfig& c) { c.n = 2; },
      [](RunConfig& c) { c.lambda_abs = 0.0; },
      [](RunConfig& c) { c.elements = 1001; },
      [](RunConfig& c) { c.m = 300; },
      [](RunConfig& c) { c.width_ratio = 1.5; },
      [](RunConfig& c) { c.levels = 7; },
      [](RunConfig& c) { c.probes = {4, 3, 5, 6}; },
      [](RunConfig& c) { c.chart = "no_such_chart"; },
      [](RunConfig& c) { c.max_tasks = 0; },
      [](RunConfig& c) { c.output_dir.clear(); },
  };
  for (std::size_t i = 0; i < bad.size(); ++i) {
    RunConfig c = ok;
    bad[i](c);
    CAPTURE(i);
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
}

TEST_CASE("charts resolve by name, descriptor or flat dimension") {
  RunConfig c;
  c.n = 5;
  CHECK(resolve_chart(c).dimension() == 5);
  CHECK(resolve_chart(c).is_flat());
  c.chart = "power_growth";
  CHECK(resolve_chart(c).metric().family == spatial::MetricFamily::power_growth);
  ChartDescriptor d;
  d.dimension = 4;
  c.chart_descriptor = d;
  CHECK(resolve_chart(c).dimension() == 4);
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.0) == "3");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("spectrum records round trip bit-exactly") {
  const auto dir = scratch("records");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectrumRecord r;
  r.config_hash = "0123456789abcdef";
  r.timestamp = "2026-10-19T12:00:00Z";
  r.dimension = 3;
  r.lambda_abs = 1.0 / 3.0;
  r.t_max = std::sqrt(37.0);
  r.elements = 2048;
  double acc = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    acc += u(rng);
    r.eigenvalues.push_back(acc);
    r.sign_changes.push_back(i);
  }
  r.orthonormality_defect = 1.2345678901234567e-13;
  r.defect_tolerance = 1e-8;
  r.truncation_estimate = 7.1e-11;
  r.converged = true;
  export_spectrum(r, (dir / "spectrum.json").string());
  CHECK(read_spectrum((dir / "spectrum.json").string()) == r);
  CHECK(slurp(dir / "spectrum.json").back() == '\n');

  SpectrumRecord empty;
  empty.converged = true;
  export_spectrum(empty, (dir / "empty.json").string());
  const json j = read_json((dir / "empty.json").string());
  CHECK(j.at("eigenvalues").is_array());
  CHECK(j.at("eigenvalues").empty());

  SpectrumRecord unsorted = r;
  std::swap(unsorted.eigenvalues[0], unsorted.eigenvalues[1]);
  CHECK_THROWS_AS(export_spectrum(unsorted, (dir / "bad.json").string()), ArgumentError);
  unsorted.converged = false;
  CHECK_NOTHROW(export_spectrum(unsorted, (dir / "flagged.json").string()));

  write_text(dir / "blocker", "x");
  CHECK_THROWS_AS(export_spectrum(r, (dir / "blocker" / "spectrum.json").string()), IoError);
}

TEST_CASE("CSV quoting and line endings") {
  const std::string text = to_csv({"name", "value", "count"},
                                  {{std::string("a,b"), 0.5, 3LL}, {std::string("say \"hi\""), 1e-20, -1LL}});
  CHECK(text == "name,value,count\r\n\"a,b\",0.5,3\r\n\"say \"\"hi\"\"\",1e-20,-1\r\n");
  CHECK(to_csv({"x"}, {}) == "x\r\n");
}

TEST_CASE("SVG plots are deterministic and validated") {
  Series s{"eps", {50, 100, 200, 400}, {0.2, 0.1, 0.05, 0.025}};
  PlotStyle style{"decay", "R", "epsilon", true, true, true};
  const std::string a = render_plot({s}, style);
  CHECK(a == render_plot({s}, style));
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("viewBox=\"0 0 800 600\"") != std::string::npos);
  CHECK(count_of(a, "<polyline") == 1);
  CHECK(a.find("class=\"guide\"") != std::string::npos);
  CHECK(guide_slope(s, style) == doctest::Approx(-1.0).epsilon(1e-12));

  Series one{"point", {1.0}, {2.0}};
  CHECK_NOTHROW(render_plot({one}, PlotStyle{}));

  Series nan_series{"bad", {1.0, 2.0}, {1.0, std::nan("")}};
  CHECK_THROWS_AS(render_plot({nan_series}, PlotStyle{}), ArgumentError);
  Series inf_series{"bad", {1.0, INFINITY}, {1.0, 2.0}};
  CHECK_THROWS_AS(render_plot({inf_series}, PlotStyle{}), ArgumentError);
  Series ragged{"bad", {1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(render_plot({ragged}, PlotStyle{}), ArgumentError);
  Series nonpositive{"bad", {1.0, 2.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(render_plot({nonpositive}, style), ArgumentError);
  CHECK_THROWS_AS(render_plot({}, PlotStyle{}), ArgumentError);

  const auto dir = scratch("plots");
  emit_plot({s}, style, (dir / "p.svg").string());
  CHECK(slurp(dir / "p.svg") == a);
}

TEST_CASE("temporal-spectrum command writes a verified record") {
  const auto dir = scratch("spectrum");
  REQUIRE(run({"temporal-spectrum", "--n", "3", "--m", "4", "--elements", "512", "--out",
               dir.string(), "--timestamp", "T0"}) == kSuccess);
  const auto rec = read_spectrum((dir / "spectrum.json").string());
  CHECK(rec.timestamp == "T0");
  CHECK(rec.converged);
  REQUIRE(rec.eigenvalues.size() == 4);
  CHECK(rec.sign_changes == std::vector<std::size_t>{0, 1, 2, 3});
  const temporal::TemporalProblem p(3, 1.0);
  const double ref = oracle::shooting_eigenvalue(
      {p.stiffness(), p.potential(), p.weight_exponent(), rec.t_max}, 0, 2.0, 3.5);
  CHECK(std::abs(rec.eigenvalues[0] - ref) < 1e-7 * ref);
  CHECK(fs::exists(dir / "eigenfunctions.csv"));
  CHECK(fs::exists(dir / "spectrum.svg"));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit_codes");
  CHECK(run({"temporal-spectrum", "--calibration", "--t-max", "2", "--m", "4", "--elements", "256",
             "--out", dir.string()}) == kNonConvergence);
  CHECK(run({"spatial-check", "--chart", "power_growth", "--out", (dir / "pg").string()}) ==
        kValidationFailure);
  const json pg = read_json((dir / "pg" / "flatness.json").string());
  CHECK_FALSE(pg.at("flatness").at("pass").get<bool>());
  CHECK(pg.at("flatness").at("violated").at(0) == "metric_limit");

  write_text(dir / "file", "x");
  CHECK(run({"spatial-check", "--out", (dir / "file" / "sub").string()}) == kIoFailure);
  CHECK(run({"temporal-spectrum", "--n", "2"}) == kValidationFailure);
  CHECK(run({"temporal-spectrum", "--no-such-flag"}) == kValidationFailure);
  CHECK(run({"temporal-spectrum", "--config", (dir / "absent.json").string()}) == kIoFailure);
}

TEST_CASE("spatial-check on the flat chart certifies the plane wave") {
  const auto dir = scratch("flat");
  REQUIRE(run({"spatial-check", "--out", dir.string(), "--plane-wave-points", "24"}) == kSuccess);
  const json j = read_json((dir / "flatness.json").string());
  CHECK(j.at("flatness").at("pass").get<bool>());
  CHECK(j.at("plane_wave").at("relative_residual").get<double>() < 1e-12);
  CHECK(fs::exists(dir / "flatness.csv"));
}

TEST_CASE("output directory precedence") {
  const auto env_dir = scratch("from_env");
  const auto flag_dir = scratch("from_flag");
  ::setenv("QDEV_OUT", env_dir.string().c_str(), 1);
  CHECK(run({"spatial-check"}) == kSuccess);
  CHECK(fs::exists(env_dir / "flatness.json"));
  CHECK(run({"spatial-check", "--out", flag_dir.string()}) == kSuccess);
  CHECK(fs::exists(flag_dir / "flatness.json"));
  ::unsetenv("QDEV_OUT");

  const auto cfg_dir = scratch("from_config");
  write_text(cfg_dir / "run.json", json{{"output_dir", (cfg_dir / "out").string()}}.dump());
  CHECK(run({"spatial-check", "--config", (cfg_dir / "run.json").string()}) == kSuccess);
  CHECK(fs::exists(cfg_dir / "out" / "flatness.json"));
}

TEST_CASE("quasimode command reports the decay slope") {
  const auto dir = scratch("quasimode");
  REQUIRE(run({"quasimode", "--R", "50,100,200,400", "--weyl-count", "3", "--out", dir.string()}) ==
          kSuccess);
  const json j = read_json((dir / "quasimode.json").string());
  CHECK(j.at("slope").get<double>() == doctest::Approx(-1.0).epsilon(0.1));
  CHECK(j.at("certificates").size() == 4);
  CHECK(fs::exists(dir / "quasimode.svg"));
}

TEST_CASE("synthesize command reports both studies") {
  const auto dir = scratch("synthesize");
  REQUIRE(run({"synthesize", "--levels", "3", "--out", dir.string()}) == kSuccess);
  const json j = read_json((dir / "synthesis.json").string());
  CHECK(j.contains("study"));
  CHECK(j.contains("mismatch"));
  CHECK(j.at("plateau_ratio").get<double>() > 10.0);
}

TEST_CASE("sweep results do not depend on concurrency") {
  const auto a = scratch("sweep_serial");
  const auto b = scratch("sweep_parallel");
  const std::vector<std::string> common{"sweep", "--m", "3", "--elements", "256", "--lambda-values",
                                        "0.5,1,16", "--dimensions", "3,4"};
  auto args_a = common;
  args_a.insert(args_a.end(), {"--max-tasks", "1", "--out", a.string()});
  auto args_b = common;
  args_b.insert(args_b.end(), {"--max-tasks", "4", "--out", b.string()});
  REQUIRE(run(args_a) == kSuccess);
  REQUIRE(run(args_b) == kSuccess);
  const json ja = read_json((a / "sweep.json").string());
  const json jb = read_json((b / "sweep.json").string());
  REQUIRE(ja.at("rows").size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(ja["rows"][i]["eigenvalues"] == jb["rows"][i]["eigenvalues"]);
    CHECK(ja["rows"][i]["scaling_defect"] == jb["rows"][i]["scaling_defect"]);
  }
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
}

TEST_CASE("repeated runs produce byte-identical JSON") {
  RunConfig c;
  c.command = "temporal-spectrum";
  c.m = 4;
  c.elements = 256;
  c.output_dir = scratch("repeat").string();
  REQUIRE(execute(c) == kSuccess);
  const std::string first = slurp(fs::path(c.output_dir) / "spectrum.json");
  REQUIRE(execute(c) == kSuccess);
  CHECK(slurp(fs::path(c.output_dir) / "spectrum.json") == first);
}
