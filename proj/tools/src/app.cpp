#include "qdev/cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>

#include "qdev/cli/csv.hpp"
#include "qdev/cli/plot.hpp"
#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"
#include "qdev/quasimode/quasimode.hpp"
#include "qdev/spatial/flatness.hpp"
#include "qdev/spatial/operator.hpp"
#include "qdev/synthesis/synthesis.hpp"
#include "qdev/temporal/forms.hpp"
#include "qdev/temporal/spectrum.hpp"

namespace qdev::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

temporal::FormCoefficients coefficients_for(const RunConfig& c) {
  return c.calibration ? temporal::kCalibrationPreset : temporal::TemporalProblem(c.n, c.lambda_abs).forms();
}

fs::path prepare_output(const RunConfig& c) {
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec || !fs::is_directory(c.output_dir)) {
    throw IoError("cannot create output directory " + c.output_dir);
  }
  return fs::path(c.output_dir);
}

double orthonormality_defect(const temporal::FormCoefficients& coeffs,
                             const temporal::TemporalSpectrum& s) {
  if (s.pairs.empty()) return 0.0;
  const auto forms = temporal::assemble_forms(coeffs, s.mesh);
  const std::size_t interior = s.mesh.elements() - 1;
  std::vector<std::vector<double>> inner;
  for (const auto& p : s.pairs) inner.emplace_back(p.coefficients.begin() + 1, p.coefficients.begin() + 1 + static_cast<long>(interior));
  double defect = 0.0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    for (std::size_t j = i; j < inner.size(); ++j) {
      const double g = forms.K.form(inner[i], inner[j]);
      defect = std::max(defect, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return defect;
}

temporal::TemporalSpectrum solve_spectrum(const RunConfig& c, double& t_max) {
  const auto coeffs = coefficients_for(c);
  t_max = c.t_max > 0.0 ? c.t_max
                        : temporal::default_t_max(coeffs, std::max<std::size_t>(c.m, 1),
                                                  c.truncation_tolerance);
  temporal::SpectrumOptions opts;
  opts.truncation_tolerance = c.truncation_tolerance;
  opts.simplicity_gap = c.simplicity_gap;
  opts.richardson = c.richardson;
  const std::size_t base = c.richardson ? c.elements / 2 : c.elements;
  return temporal::temporal_spectrum(coeffs, temporal::Mesh1D::graded(t_max, base), c.m, opts);
}

json flatness_json(const spatial::FlatnessReport& r) {
  json violated = json::array();
  for (auto v : r.violated) violated.push_back(std::string(spatial::to_string(v)));
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"radius", s.radius},
                       {"metric_deviation", s.metric_deviation},
                       {"derivative_norm", s.derivative_norm},
                       {"distance_slope", s.distance_slope},
                       {"potential", s.potential}});
  }
  return {{"pass", r.pass},
          {"violated", violated},
          {"max_metric_deviation", r.max_metric_deviation},
          {"max_derivative_norm", r.max_derivative_norm},
          {"max_distance_slope", r.max_distance_slope},
          {"max_potential", r.max_potential},
          {"samples", samples}};
}

json certificate_json(const quasimode::ResidualCertificate& c) {
  return {{"k", c.k},
          {"R", c.center},
          {"W", c.half_width},
          {"epsilon", c.epsilon},
          {"breakdown",
           {{"curvature", c.curvature},
            {"cross", c.cross},
            {"geometric", c.geometric},
            {"potential", c.potential}}}};
}

json metadata(const RunConfig& c) {
  return {{"config_hash", config_hash(c)}, {"timestamp", c.timestamp}, {"command", c.command}};
}

int temporal_spectrum_command(const RunConfig& c) {
  const auto dir = prepare_output(c);
  double t_max = 0.0;
  const auto spectrum = solve_spectrum(c, t_max);
  SpectrumRecord record;
  record.config_hash = config_hash(c);
  record.timestamp = c.timestamp;
  record.dimension = c.calibration ? 0 : c.n;
  record.lambda_abs = c.calibration ? 0.0 : c.lambda_abs;
  record.t_max = t_max;
  record.elements = spectrum.mesh.elements();
  record.defect_tolerance = c.orthonormality_tolerance;
  record.orthonormality_defect = orthonormality_defect(coefficients_for(c), spectrum);
  record.truncation_estimate = spectrum.truncation_estimate;
  for (const auto& p : spectrum.pairs) {
    record.eigenvalues.push_back(p.eigenvalue);
    record.sign_changes.push_back(temporal::count_sign_changes(p));
  }
  record.converged = record.orthonormality_defect < c.orthonormality_tolerance;
  export_spectrum(record, (dir / "spectrum.json").string());

  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < spectrum.pairs.size(); ++i) header.push_back("w" + std::to_string(i));
  std::vector<std::vector<CsvCell>> rows;
  const auto nodes = spectrum.mesh.nodes();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    std::vector<CsvCell> row{nodes[a]};
    for (const auto& p : spectrum.pairs) row.emplace_back(p.coefficients[a]);
    rows.push_back(std::move(row));
  }
  write_csv((dir / "eigenfunctions.csv").string(), header, rows);
  if (!spectrum.pairs.empty()) {
    Series s{"eigenvalues", {}, record.eigenvalues};
    for (std::size_t i = 0; i < record.eigenvalues.size(); ++i) s.x.push_back(static_cast<double>(i));
    emit_plot({s}, {"temporal spectrum", "index", "eigenvalue"}, (dir / "spectrum.svg").string());
  }
  return record.converged ? kSuccess : kNonConvergence;
}

std::vector<double> probes_for(const RunConfig& c, const spatial::SpatialChart& chart) {
  if (!c.probes.empty()) return c.probes;
  if (!c.chart_descriptor && c.chart != "flat") return spatial::fixture_probe_radii();
  return spatial::default_probe_radii(chart);
}

int spatial_check_command(const RunConfig& c) {
  const auto dir = prepare_output(c);
  const auto chart = resolve_chart(c);
  const auto report = spatial::validate_asymptotic_flatness(chart, probes_for(c, chart));
  json out = metadata(c);
  out["flatness"] = flatness_json(report);
  out["chart"] = to_json(c)["chart"];
  out["plane_wave"] = nullptr;
  if (chart.is_flat() && chart.has_zero_potential()) {
    const auto n = static_cast<std::size_t>(chart.dimension());
    spatial::BoxGrid grid;
    grid.shape.assign(n, c.plane_wave_points);
    grid.spacing = 1.0 / static_cast<double>(c.plane_wave_points);
    grid.origin.assign(n, 0.0);
    std::vector<double> k(n);
    for (std::size_t d = 0; d < n; ++d) {
      k[d] = 2.0 * std::numbers::pi * static_cast<double>(d + 1);
    }
    const auto pw = spatial::plane_wave_residual(chart, k, grid);
    out["plane_wave"] = {{"k", k},
                         {"lambda_h", pw.lambda_h},
                         {"lambda_continuum", pw.lambda_continuum},
                         {"residual", pw.residual},
                         {"relative_residual", pw.relative_residual}};
  }
  write_json(out, (dir / "flatness.json").string());
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& s : report.samples) {
    rows.push_back({s.radius, s.metric_deviation, s.derivative_norm, s.distance_slope, s.potential});
  }
  write_csv((dir / "flatness.csv").string(),
            {"radius", "metric_deviation", "derivative_norm", "distance_slope", "potential"}, rows);
  return report.pass ? kSuccess : kValidationFailure;
}

int quasimode_command(const RunConfig& c) {
  const auto dir = prepare_output(c);
  const auto chart = resolve_chart(c);
  std::vector<quasimode::ResidualCertificate> certs;
  for (double r : c.radii) {
    const quasimode::QuasimodeSpec spec{c.k, r, c.width_ratio * r};
    const auto field = quasimode::build_quasimode(spec, chart);
    certs.push_back(quasimode::quasimode_residual(field, spec, chart));
  }
  const auto family = quasimode::weyl_family(c.k, c.weyl_count, chart);
  double off_diagonal = 0.0;
  for (std::size_t a = 0; a < c.weyl_count; ++a) {
    for (std::size_t b = 0; b < c.weyl_count; ++b) {
      if (a != b) off_diagonal = std::max(off_diagonal, family.gram[a * c.weyl_count + b]);
    }
  }

  json out = metadata(c);
  json rows = json::array();
  std::vector<std::vector<CsvCell>> csv;
  Series series{"epsilon", {}, {}};
  for (const auto& cert : certs) {
    rows.push_back(certificate_json(cert));
    csv.push_back({cert.center, cert.half_width, cert.epsilon, cert.curvature, cert.cross,
                   cert.geometric, cert.potential});
    series.x.push_back(cert.center);
    series.y.push_back(cert.epsilon);
  }
  out["certificates"] = rows;
  out["slope"] = certs.size() >= 2 ? json(numerics::loglog_slope(series.x, series.y)) : json(nullptr);
  json weyl_certs = json::array();
  for (const auto& cert : family.certificates) weyl_certs.push_back(certificate_json(cert));
  out["weyl"] = {{"count", c.weyl_count},
                 {"max_epsilon", family.max_epsilon},
                 {"max_off_diagonal", off_diagonal},
                 {"certificates", weyl_certs}};
  write_json(out, (dir / "quasimode.json").string());
  write_csv((dir / "quasimode.csv").string(),
            {"R", "W", "epsilon", "curvature", "cross", "geometric", "potential"}, csv);
  bool positive = std::all_of(series.y.begin(), series.y.end(), [](double y) { return y > 0.0; });
  emit_plot({series}, {"quasimode residual", "R", "epsilon", true, positive, series.x.size() >= 2},
            (dir / "quasimode.svg").string());
  return kSuccess;
}

synthesis::RefinementStudy study_for(const RunConfig& c, double factor) {
  synthesis::RefinementOptions o;
  o.coefficients = coefficients_for(c);
  o.t_max = c.t_max > 0.0 ? c.t_max
                          : (c.calibration ? 12.0
                                           : temporal::default_t_max(o.coefficients, c.index + 1,
                                                                     c.truncation_tolerance));
  o.index = c.index;
  o.dimension = c.n;
  o.levels = c.levels;
  o.spatial_factor = factor;
  return synthesis::plane_wave_refinement_study(o);
}

json study_json(const synthesis::RefinementStudy& s) {
  json levels = json::array();
  for (const auto& l : s.levels) {
    levels.push_back({{"time_elements", l.time_elements},
                      {"space_intervals", l.space_intervals},
                      {"temporal_eigenvalue", l.temporal_eigenvalue},
                      {"relative_residual", l.relative_residual}});
  }
  return {{"levels", levels}, {"slope", s.slope}};
}

int synthesize_command(const RunConfig& c) {
  const auto dir = prepare_output(c);
  const auto primary = study_for(c, c.spatial_factor);
  json out = metadata(c);
  out["study"] = study_json(primary);
  const auto& finest = primary.levels.back();
  out["wavenumber"] = std::sqrt(c.spatial_factor * finest.temporal_eigenvalue / (c.n - 1.0));

  std::vector<Series> plots;
  Series matched{"spatial factor " + format_double(c.spatial_factor), {}, {}};
  for (const auto& l : primary.levels) {
    matched.x.push_back(1.0 / static_cast<double>(l.time_elements));
    matched.y.push_back(l.relative_residual);
  }
  plots.push_back(matched);
  if (c.spatial_factor == 1.0) {
    const auto mismatch = study_for(c, 2.0);
    out["mismatch"] = study_json(mismatch);
    out["plateau_ratio"] = mismatch.levels.back().relative_residual / finest.relative_residual;
    Series s{"spatial factor 2", {}, {}};
    for (const auto& l : mismatch.levels) {
      s.x.push_back(1.0 / static_cast<double>(l.time_elements));
      s.y.push_back(l.relative_residual);
    }
    plots.push_back(s);
  }
  write_json(out, (dir / "synthesis.json").string());
  std::vector<std::vector<CsvCell>> rows;
  for (const auto& l : primary.levels) {
    rows.push_back({static_cast<long long>(l.time_elements), static_cast<long long>(l.space_intervals),
                    l.temporal_eigenvalue, l.relative_residual});
  }
  write_csv((dir / "synthesis.csv").string(),
            {"time_elements", "space_intervals", "temporal_eigenvalue", "relative_residual"}, rows);
  bool positive = true;
  for (const auto& s : plots) {
    for (double y : s.y) positive = positive && y > 0.0;
  }
  emit_plot(plots, {"wave residual under refinement", "mesh width", "relative residual", true, positive, true},
            (dir / "synthesis.svg").string());
  return kSuccess;
}

int sweep_command(const RunConfig& c) {
  const auto dir = prepare_output(c);
  std::vector<RunConfig> jobs;
  for (int n : c.dimensions) {
    for (double l : c.lambda_values) {
      RunConfig job = c;
      job.command = "temporal-spectrum";
      job.calibration = false;
      job.n = n;
      job.lambda_abs = l;
      jobs.push_back(job);
    }
  }
  std::vector<SpectrumRecord> records(jobs.size());
  for (std::size_t start = 0; start < jobs.size(); start += c.max_tasks) {
    const std::size_t stop = std::min(jobs.size(), start + c.max_tasks);
    std::vector<std::future<SpectrumRecord>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, compute_spectrum_record, std::cref(jobs[i])));
    }
    for (std::size_t i = start; i < stop; ++i) records[i] = batch[i - start].get();
  }

  json out = metadata(c);
  json rows = json::array();
  std::vector<std::vector<CsvCell>> csv;
  bool converged = true;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& r = records[j];
    json row = to_json(r);
    converged = converged && r.converged;
    // Deviation from |Lambda|^(1 - 1/n) lambda_i(1) when |Lambda| = 1 is in the sweep.
    const auto ref = std::find_if(records.begin(), records.end(), [&](const SpectrumRecord& o) {
      return o.dimension == r.dimension && o.lambda_abs == 1.0;
    });
    if (ref != records.end()) {
      double worst = 0.0;
      for (std::size_t i = 0; i < std::min(r.eigenvalues.size(), ref->eigenvalues.size()); ++i) {
        const double predicted = temporal::scaled_eigenvalue(ref->eigenvalues[i], r.lambda_abs, r.dimension);
        worst = std::max(worst, std::abs(r.eigenvalues[i] - predicted) / r.eigenvalues[i]);
      }
      row["scaling_defect"] = worst;
    } else {
      row["scaling_defect"] = nullptr;
    }
    rows.push_back(row);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      csv.push_back({static_cast<long long>(r.dimension), r.lambda_abs, static_cast<long long>(i),
                     r.eigenvalues[i]});
    }
  }
  out["rows"] = rows;
  write_json(out, (dir / "sweep.json").string());
  write_csv((dir / "sweep.csv").string(), {"n", "lambda_abs", "index", "eigenvalue"}, csv);
  return converged ? kSuccess : kNonConvergence;
}

int report(const std::string& kind, const std::exception& e, int code) {
  std::cerr << "qdev: " << kind << ": " << e.what() << '\n';
  return code;
}

}  // namespace

SpectrumRecord compute_spectrum_record(const RunConfig& c) {
  double t_max = 0.0;
  const auto spectrum = solve_spectrum(c, t_max);
  SpectrumRecord record;
  record.config_hash = config_hash(c);
  record.timestamp = c.timestamp;
  record.dimension = c.calibration ? 0 : c.n;
  record.lambda_abs = c.calibration ? 0.0 : c.lambda_abs;
  record.t_max = t_max;
  record.elements = spectrum.mesh.elements();
  record.defect_tolerance = c.orthonormality_tolerance;
  record.orthonormality_defect = orthonormality_defect(coefficients_for(c), spectrum);
  record.truncation_estimate = spectrum.truncation_estimate;
  for (const auto& p : spectrum.pairs) {
    record.eigenvalues.push_back(p.eigenvalue);
    record.sign_changes.push_back(temporal::count_sign_changes(p));
  }
  record.converged = record.orthonormality_defect < c.orthonormality_tolerance;
  return record;
}

int execute(const RunConfig& c) {
  try {
    if (c.command == "temporal-spectrum") return temporal_spectrum_command(c);
    if (c.command == "spatial-check") return spatial_check_command(c);
    if (c.command == "quasimode") return quasimode_command(c);
    if (c.command == "synthesize") return synthesize_command(c);
    if (c.command == "sweep") return sweep_command(c);
    throw ConfigError("unknown command " + c.command);
  } catch (const IoError& e) {
    return report("io error", e, kIoFailure);
  } catch (const TruncationError& e) {
    return report("not converged", e, kNonConvergence);
  } catch (const SimplicityError& e) {
    return report("not converged", e, kNonConvergence);
  } catch (const ConsistencyError& e) {
    return report("not converged", e, kNonConvergence);
  } catch (const qdev::Error& e) {
    return report("validation failed", e, kValidationFailure);
  } catch (const ConfigError& e) {
    return report("config", e, kValidationFailure);
  } catch (const fs::filesystem_error& e) {
    return report("io error", e, kIoFailure);
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"qdev: separable wave-equation spectral toolkit"};
  app.require_subcommand(1);
  std::optional<std::string> config_path, out_dir, timestamp, chart;
  std::optional<int> n;
  std::optional<double> lambda_abs, t_max, tol, k, width_ratio, spatial_factor;
  std::optional<std::size_t> elements, m, index, levels, weyl_count, max_tasks, plane_wave_points;
  std::optional<std::vector<double>> radii, probes, lambda_values;
  std::optional<std::vector<int>> dimensions;
  bool calibration = false, no_richardson = false;

  const std::vector<std::string> commands{"temporal-spectrum", "spatial-check", "quasimode",
                                          "synthesize", "sweep"};
  for (const auto& name : commands) app.add_subcommand(name)->fallthrough();

  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--out", out_dir, "output directory (overrides QDEV_OUT)");
  app.add_option("--timestamp", timestamp, "timestamp string recorded in outputs");
  app.add_option("--n", n, "spatial dimension");
  app.add_option("--lambda-abs", lambda_abs, "|Lambda|");
  app.add_flag("--calibration", calibration, "oscillator calibration preset");
  app.add_option("--t-max", t_max, "temporal cutoff (0 = automatic)");
  app.add_option("--elements", elements, "temporal elements");
  app.add_option("--m", m, "number of eigenpairs");
  app.add_flag("--no-richardson", no_richardson, "skip Richardson extrapolation");
  app.add_option("--truncation-tolerance", tol, "tail estimate tolerance");
  app.add_option("--chart", chart, "chart fixture name or flat");
  app.add_option("--probes", probes, "probe radii")->delimiter(',');
  app.add_option("--plane-wave-points", plane_wave_points, "box points per axis");
  app.add_option("--k", k, "wavenumber");
  app.add_option("--R,--radii", radii, "annulus centers")->delimiter(',');
  app.add_option("--W-ratio", width_ratio, "half width over center");
  app.add_option("--weyl-count", weyl_count, "Weyl family size");
  app.add_option("--index", index, "temporal mode index");
  app.add_option("--levels", levels, "refinement levels");
  app.add_option("--spatial-factor", spatial_factor, "lambda_A / lambda_i");
  app.add_option("--lambda-values", lambda_values, "sweep |Lambda| values")->delimiter(',');
  app.add_option("--dimensions", dimensions, "sweep dimensions")->delimiter(',');
  app.add_option("--max-tasks", max_tasks, "concurrent sweep tasks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidationFailure;
  }

  RunConfig config;
  try {
    if (config_path) config = load_config(*config_path);
  } catch (const ConfigError& e) {
    return report("config " + *config_path, e, kValidationFailure);
  } catch (const IoError& e) {
    return report("io error", e, kIoFailure);
  }
  config.command = app.get_subcommands().front()->get_name();
  if (const char* env = std::getenv("QDEV_OUT"); env && *env) config.output_dir = env;
  if (out_dir) config.output_dir = *out_dir;
  if (timestamp) config.timestamp = *timestamp;
  if (n) config.n = *n;
  if (lambda_abs) config.lambda_abs = *lambda_abs;
  if (calibration) config.calibration = true;
  if (t_max) config.t_max = *t_max;
  if (elements) config.elements = *elements;
  if (m) config.m = *m;
  if (no_richardson) config.richardson = false;
  if (tol) config.truncation_tolerance = *tol;
  if (chart) {
    config.chart = *chart;
    config.chart_descriptor.reset();
  }
  if (probes) config.probes = *probes;
  if (plane_wave_points) config.plane_wave_points = *plane_wave_points;
  if (k) config.k = *k;
  if (radii) config.radii = *radii;
  if (width_ratio) config.width_ratio = *width_ratio;
  if (weyl_count) config.weyl_count = *weyl_count;
  if (index) config.index = *index;
  if (levels) config.levels = *levels;
  if (spatial_factor) config.spatial_factor = *spatial_factor;
  if (lambda_values) config.lambda_values = *lambda_values;
  if (dimensions) config.dimensions = *dimensions;
  if (max_tasks) config.max_tasks = *max_tasks;

  try {
    validate(config);
  } catch (const ConfigError& e) {
    return report("config", e, kValidationFailure);
  }
  return execute(config);
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"qdev"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qdev::cli
