#include "qdev/spatial/chart.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qdev/errors.hpp"

namespace qdev::spatial {
namespace {

constexpr std::array kMetricNames{
    std::pair{MetricFamily::flat, std::string_view{"flat"}},
    std::pair{MetricFamily::conformal_power, std::string_view{"conformal_power"}},
    std::pair{MetricFamily::power_growth, std::string_view{"power_growth"}},
    std::pair{MetricFamily::constant_scale, std::string_view{"constant_scale"}},
    std::pair{MetricFamily::anisotropic, std::string_view{"anisotropic"}},
    std::pair{MetricFamily::oscillating, std::string_view{"oscillating"}},
    std::pair{MetricFamily::schwarzschild_conformal, std::string_view{"schwarzschild_conformal"}},
};

constexpr std::array kPotentialNames{
    std::pair{PotentialFamily::zero, std::string_view{"zero"}},
    std::pair{PotentialFamily::constant, std::string_view{"constant"}},
    std::pair{PotentialFamily::lorentzian, std::string_view{"lorentzian"}},
    std::pair{PotentialFamily::power_law, std::string_view{"power_law"}},
    std::pair{PotentialFamily::yukawa, std::string_view{"yukawa"}},
};

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// sin(pi s) with the argument reduced exactly modulo 2 first.
double sin_pi(double s) { return std::sin(std::numbers::pi * std::fmod(s, 2.0)); }
double cos_pi(double s) { return std::cos(std::numbers::pi * std::fmod(s, 2.0)); }

}  // namespace

std::string_view to_string(MetricFamily family) {
  for (const auto& [f, name] : kMetricNames) {
    if (f == family) return name;
  }
  return "unknown";
}

std::string_view to_string(PotentialFamily family) {
  for (const auto& [f, name] : kPotentialNames) {
    if (f == family) return name;
  }
  return "unknown";
}

MetricFamily metric_family_from_string(std::string_view name) {
  for (const auto& [f, n] : kMetricNames) {
    if (n == name) return f;
  }
  throw ArgumentError("unknown metric family '" + std::string(name) + "'");
}

PotentialFamily potential_family_from_string(std::string_view name) {
  for (const auto& [f, n] : kPotentialNames) {
    if (n == name) return f;
  }
  throw ArgumentError("unknown potential family '" + std::string(name) + "'");
}

SpatialChart::SpatialChart(int n, MetricDescriptor metric, double metric_decay,
                           PotentialDescriptor potential, double potential_decay,
                           double inner_radius)
    : n_(n),
      metric_(metric),
      metric_decay_(metric_decay),
      potential_(potential),
      potential_decay_(potential_decay),
      inner_radius_(inner_radius) {
  if (n < 3) throw ArgumentError("SpatialChart: dimension must be >= 3");
  if (!(metric_decay > 0.0) || !(potential_decay > 0.0)) {
    throw ArgumentError("SpatialChart: declared decay rates must be positive");
  }
  if (!(inner_radius >= 0.0) || !std::isfinite(inner_radius)) {
    throw ArgumentError("SpatialChart: inner radius must be finite and >= 0");
  }
  if (!std::isfinite(metric.amplitude) || !std::isfinite(metric.exponent) ||
      !std::isfinite(potential.amplitude) || !std::isfinite(potential.exponent)) {
    throw ArgumentError("SpatialChart: non-finite family parameter");
  }
}

SpatialChart SpatialChart::flat(int n) { return SpatialChart(n, {}, 1.0, {}, 1.0, 0.0); }

SpatialChart SpatialChart::flat(int n, PotentialDescriptor potential, double potential_decay) {
  return SpatialChart(n, {}, 1.0, potential, potential_decay, 0.0);
}

bool SpatialChart::is_radial_conformal() const {
  return metric_.family != MetricFamily::anisotropic;
}

double SpatialChart::potential_at(double r) const {
  const double a = potential_.amplitude;
  const double q = potential_.exponent;
  switch (potential_.family) {
    case PotentialFamily::zero:
      return 0.0;
    case PotentialFamily::constant:
      return a;
    case PotentialFamily::lorentzian:
      return a / (1.0 + r * r);
    case PotentialFamily::power_law:
      return a * std::pow(1.0 + r * r, -0.5 * q);
    case PotentialFamily::yukawa:
      return a * std::exp(-q * r) / (1.0 + r);
  }
  return 0.0;
}

ConformalProfile SpatialChart::conformal_profile(double r) const {
  const double a = metric_.amplitude;
  const double q = metric_.exponent;
  switch (metric_.family) {
    case MetricFamily::flat:
      return {1.0, 0.0};
    case MetricFamily::conformal_power:
      return {1.0 + a * std::pow(r, -q), -q * a * std::pow(r, -q - 1.0)};
    case MetricFamily::power_growth:
      return {std::pow(r, q), q * std::pow(r, q - 1.0)};
    case MetricFamily::constant_scale:
      return {1.0 + a, 0.0};
    case MetricFamily::oscillating: {
      // A sin(pi r^q) r^(1 - q)
      const double s = sin_pi(std::pow(r, q));
      const double c = cos_pi(std::pow(r, q));
      const double psi = 1.0 + a * s * std::pow(r, 1.0 - q);
      const double dpsi = a * (std::numbers::pi * q * c + (1.0 - q) * s * std::pow(r, -q));
      return {psi, dpsi};
    }
    case MetricFamily::schwarzschild_conformal: {
      const double phi = 1.0 + a / (2.0 * r);
      return {std::pow(phi, 4), -2.0 * a * std::pow(phi, 3) / (r * r)};
    }
    case MetricFamily::anisotropic:
      break;
  }
  throw UnsupportedError("conformal_profile: metric family is not radially conformal");
}

void SpatialChart::metric_perturbation(std::span<const double> x, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(n_);
  if (x.size() != n || out.size() != n * n) {
    throw ArgumentError("metric_perturbation: size mismatch");
  }
  for (auto& v : out) v = 0.0;
  const double r = norm(x);
  if (metric_.family == MetricFamily::flat) return;
  if (!(r > 0.0)) throw ArgumentError("metric_perturbation: evaluation at the origin");
  if (metric_.family == MetricFamily::anisotropic) {
    const double s = metric_.amplitude * std::pow(r, -(2.0 + metric_.exponent));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = s * x[i] * x[j];
    }
    return;
  }
  const double e = conformal_profile(r).psi - 1.0;
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = e;
}

double SpatialChart::radial_perturbation(std::span<const double> x) const {
  const double r = norm(x);
  if (metric_.family == MetricFamily::flat) return 0.0;
  if (!(r > 0.0)) throw ArgumentError("radial_perturbation: evaluation at the origin");
  if (metric_.family == MetricFamily::anisotropic) {
    return metric_.amplitude * std::pow(r, -metric_.exponent);
  }
  return conformal_profile(r).psi - 1.0;
}

}  // namespace qdev::spatial
