#include "qdev/spatial/flatness.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "qdev/errors.hpp"

namespace qdev::spatial {
namespace {

std::vector<std::array<double, 3>> probe_directions() {
  std::vector<std::array<double, 3>> dirs;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double len = std::sqrt(static_cast<double>(a * a + b * b + c * c));
        dirs.push_back({a / len, b / len, c / len});
      }
    }
  }
  return dirs;
}

std::vector<double> embed(const std::array<double, 3>& u, double r, int n) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < 3; ++i) x[i] = r * u[i];
  return x;
}

bool positive_definite(std::vector<double> g, std::size_t n) {
  // In-place Cholesky.
  for (std::size_t j = 0; j < n; ++j) {
    double d = g[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= g[j * n + k] * g[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    g[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = g[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= g[i * n + k] * g[j * n + k];
      g[i * n + j] = s / d;
    }
  }
  return true;
}

double max_abs_perturbation(const SpatialChart& chart, std::span<const double> x,
                            std::vector<double>& scratch) {
  chart.metric_perturbation(x, scratch);
  double m = 0.0;
  for (double v : scratch) m = std::max(m, std::abs(v));
  return m;
}

// max_{i,j,k} |d e_ij / dx_k| by a five-point stencil.
double max_derivative(const SpatialChart& chart, std::vector<double> x, double r) {
  const std::size_t n = x.size();
  const double h = 1e-3 / (1.0 + r);
  std::vector<double> em2(n * n), em1(n * n), ep1(n * n), ep2(n * n);
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xk = x[k];
    x[k] = xk - 2 * h;
    chart.metric_perturbation(x, em2);
    x[k] = xk - h;
    chart.metric_perturbation(x, em1);
    x[k] = xk + h;
    chart.metric_perturbation(x, ep1);
    x[k] = xk + 2 * h;
    chart.metric_perturbation(x, ep2);
    x[k] = xk;
    for (std::size_t i = 0; i < n * n; ++i) {
      const double d = (em2[i] - 8.0 * em1[i] + 8.0 * ep1[i] - ep2[i]) / (12.0 * h);
      m = std::max(m, std::abs(d));
    }
  }
  return m;
}

// Radial path length from `from` to `to` along direction u, unit-length pieces.
double path_length(const SpatialChart& chart, const std::array<double, 3>& u, double from,
                   double to) {
  const int n = chart.dimension();
  auto line_element = [&](double s) {
    const auto x = embed(u, s, n);
    return std::sqrt(1.0 + chart.radial_perturbation(x));
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  double a = from;
  while (a < to) {
    const double b = std::min(to, a + 1.0);
    total += gauss_kronrod<double, 21>::integrate(line_element, a, b, 7, 1e-9);
    a = b;
  }
  return total;
}

bool sequence_passes(std::span<const double> radii, std::span<const double> values, double decay) {
  const std::size_t count = values.size();
  std::vector<double> tail(count);
  double running = 0.0;
  for (std::size_t k = count; k-- > 0;) {
    running = std::max(running, values[k]);
    tail[k] = running;
  }
  if (tail.front() <= kFlatnessFloor) return true;
  const double s = 0.5 * decay;
  const double c = std::max(tail[0] * std::pow(radii[0], s), tail[1] * std::pow(radii[1], s));
  for (std::size_t k = 0; k < count; ++k) {
    const double tol = kFlatnessSlack * c * std::pow(radii[k], -s);
    if (tail[k] > tol * (1.0 + 1e-9) + kFlatnessFloor) return false;
  }
  return tail.back() < tail.front();
}

}  // namespace

std::string_view to_string(FlatnessCondition condition) {
  switch (condition) {
    case FlatnessCondition::metric_limit:
      return "metric_limit";
    case FlatnessCondition::metric_derivative_limit:
      return "metric_derivative_limit";
    case FlatnessCondition::distance_comparability:
      return "distance_comparability";
    case FlatnessCondition::potential_limit:
      return "potential_limit";
  }
  return "unknown";
}

bool FlatnessReport::violates(FlatnessCondition c) const {
  return std::find(violated.begin(), violated.end(), c) != violated.end();
}

FlatnessReport validate_asymptotic_flatness(const SpatialChart& chart,
                                            std::span<const double> probe_radii) {
  const double inner = chart.inner_radius();
  for (std::size_t k = 0; k < probe_radii.size(); ++k) {
    if (!(probe_radii[k] > inner) || !std::isfinite(probe_radii[k])) {
      throw ArgumentError("validate_asymptotic_flatness: probe radius inside the inner region");
    }
    if (k > 0 && !(probe_radii[k] > probe_radii[k - 1])) {
      throw ArgumentError("validate_asymptotic_flatness: probe radii must be ascending");
    }
  }
  if (probe_radii.size() < 4) {
    throw ArgumentError("validate_asymptotic_flatness: at least 4 probe radii required");
  }

  const int n = chart.dimension();
  const auto un = static_cast<std::size_t>(n);
  const auto dirs = probe_directions();
  const double base = inner > 0.0 ? inner : 0.5 * probe_radii[0];

  FlatnessReport report;
  std::vector<double> scratch(un * un);
  std::vector<double> rho(dirs.size(), base);
  double previous = base;
  for (double r : probe_radii) {
    ProbeSample s;
    s.radius = r;
    s.potential = std::abs(chart.potential_at(r));
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const auto x = embed(dirs[d], r, n);
      const double dev = max_abs_perturbation(chart, x, scratch);
      for (std::size_t i = 0; i < un; ++i) scratch[i * un + i] += 1.0;
      if (!positive_definite(scratch, un)) {
        throw ArgumentError("validate_asymptotic_flatness: metric not positive definite at r = " +
                            std::to_string(r));
      }
      s.metric_deviation = std::max(s.metric_deviation, dev);
      s.derivative_norm = std::max(s.derivative_norm, max_derivative(chart, x, r));
      if (!chart.is_flat()) {
        const bool shared = chart.is_radial_conformal() && d > 0;
        rho[d] = shared ? rho[0] : rho[d] + path_length(chart, dirs[d], previous, r);
        const double sigma = std::sqrt(1.0 + chart.radial_perturbation(x));
        s.distance_slope = std::max(s.distance_slope, std::abs(r * sigma / rho[d] - 1.0));
      }
    }
    previous = r;
    report.samples.push_back(s);
  }

  std::vector<double> dev, der, dist, pot;
  for (const auto& s : report.samples) {
    dev.push_back(s.metric_deviation);
    der.push_back(s.derivative_norm);
    dist.push_back(s.distance_slope);
    pot.push_back(s.potential);
    report.max_metric_deviation = std::max(report.max_metric_deviation, s.metric_deviation);
    report.max_derivative_norm = std::max(report.max_derivative_norm, s.derivative_norm);
    report.max_distance_slope = std::max(report.max_distance_slope, s.distance_slope);
    report.max_potential = std::max(report.max_potential, s.potential);
  }
  if (!sequence_passes(probe_radii, dev, chart.metric_decay())) {
    report.violated.push_back(FlatnessCondition::metric_limit);
  }
  if (!sequence_passes(probe_radii, der, chart.metric_decay())) {
    report.violated.push_back(FlatnessCondition::metric_derivative_limit);
  }
  if (!sequence_passes(probe_radii, dist, chart.metric_decay())) {
    report.violated.push_back(FlatnessCondition::distance_comparability);
  }
  if (!sequence_passes(probe_radii, pot, chart.potential_decay())) {
    report.violated.push_back(FlatnessCondition::potential_limit);
  }
  report.pass = report.violated.empty();
  return report;
}

std::vector<double> default_probe_radii(const SpatialChart& chart) {
  const double base = std::max(2.0 * chart.inner_radius(), 2.0);
  std::vector<double> radii;
  for (int k = 0; k < 10; ++k) radii.push_back(base * std::ldexp(1.0, k));
  return radii;
}

std::vector<double> fixture_probe_radii() {
  return {16, 25, 36, 64, 100, 144, 256, 400, 625, 900, 1600, 2500, 3600};
}

std::vector<ChartFixture> standard_fixtures() {
  using MF = MetricFamily;
  using PF = PotentialFamily;
  using FC = FlatnessCondition;
  constexpr double inner = 4.0;
  auto chart = [](MetricDescriptor m, double mq, PotentialDescriptor v, double vq) {
    return SpatialChart(3, m, mq, v, vq, inner);
  };
  std::vector<ChartFixture> out;
  // Conforming.
  out.push_back({"flat", chart({MF::flat}, 1, {PF::zero}, 1), {}});
  out.push_back({"conformal_inverse_r",
                 chart({MF::conformal_power, 1.0, 1.0}, 1, {PF::lorentzian, 1.0}, 2), {}});
  out.push_back({"schwarzschild_conformal",
                 chart({MF::schwarzschild_conformal, 1.0}, 1, {PF::zero}, 1), {}});
  out.push_back({"anisotropic_decaying",
                 chart({MF::anisotropic, 0.5, 1.0}, 1, {PF::yukawa, 1.0, 1.0}, 2), {}});
  out.push_back({"conformal_inverse_square",
                 chart({MF::conformal_power, 2.0, 2.0}, 2, {PF::power_law, -1.0, 1.0}, 1), {}});
  out.push_back({"conformal_slow",
                 chart({MF::conformal_power, 0.5, 0.5}, 0.5, {PF::lorentzian, 3.0}, 2), {}});
  // Violating; declared rates are what the chart claims, not what it does.
  out.push_back({"power_growth", chart({MF::power_growth, 0.0, 0.1}, 1, {PF::zero}, 1),
                 {FC::metric_limit, FC::distance_comparability}});
  out.push_back({"constant_scale", chart({MF::constant_scale, 1.0}, 1, {PF::zero}, 1),
                 {FC::metric_limit}});
  out.push_back({"anisotropic_nondecaying",
                 chart({MF::anisotropic, 0.5, 0.0}, 1, {PF::zero}, 1), {FC::metric_limit}});
  out.push_back({"oscillating", chart({MF::oscillating, 0.5, 1.5}, 1, {PF::zero}, 1),
                 {FC::metric_derivative_limit}});
  out.push_back({"constant_potential", chart({MF::flat}, 1, {PF::constant, 0.5}, 2),
                 {FC::potential_limit}});
  out.push_back({"growing_potential", chart({MF::flat}, 1, {PF::power_law, 0.1, -0.5}, 1),
                 {FC::potential_limit}});
  return out;
}

}  // namespace qdev::spatial
