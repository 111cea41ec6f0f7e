#pragma once

#include <span>
#include <string>
#include <string_view>

namespace qdev::spatial {

/// Closed-form metric families g_ij = delta_ij + e_ij(x) on the exterior chart.
enum class MetricFamily {
  flat,                     // e = 0
  conformal_power,          // g = (1 + A r^-q) delta
  power_growth,             // g = r^q delta
  constant_scale,           // g = (1 + A) delta
  anisotropic,              // e_ij = A x_i x_j / r^(2 + q)
  oscillating,              // g = (1 + A sin(pi r^q) / r^(q - 1)) delta
  schwarzschild_conformal,  // g = (1 + A / (2 r))^4 delta
};

/// Closed-form radial potential families V(r).
enum class PotentialFamily {
  zero,        // 0
  constant,    // A
  lorentzian,  // A / (1 + r^2)
  power_law,   // A (1 + r^2)^(-q/2); q < 0 grows
  yukawa,      // A exp(-q r) / (1 + r)
};

struct MetricDescriptor {
  MetricFamily family = MetricFamily::flat;
  double amplitude = 0.0;
  double exponent = 0.0;
};

struct PotentialDescriptor {
  PotentialFamily family = PotentialFamily::zero;
  double amplitude = 0.0;
  double exponent = 0.0;
};

std::string_view to_string(MetricFamily family);
std::string_view to_string(PotentialFamily family);
/// Throws ArgumentError for an unknown name.
MetricFamily metric_family_from_string(std::string_view name);
PotentialFamily potential_family_from_string(std::string_view name);

/// Conformal factor psi with g = psi * delta, and d psi / dr.
struct ConformalProfile {
  double psi;
  double dpsi;
};

/// Exterior chart of an asymptotically Euclidean manifold: dimension, metric
/// perturbation, lumped lower-order potential V and declared decay rates. The
/// ball of radius inner_radius stands in for the compact core.
class SpatialChart {
 public:
  /// Throws ArgumentError for n < 3, non-positive decay rates or a negative
  /// inner radius.
  SpatialChart(int n, MetricDescriptor metric, double metric_decay, PotentialDescriptor potential,
               double potential_decay, double inner_radius);

  /// Flat metric, V = 0.
  static SpatialChart flat(int n);
  /// Flat metric with the given potential.
  static SpatialChart flat(int n, PotentialDescriptor potential, double potential_decay);

  int dimension() const { return n_; }
  const MetricDescriptor& metric() const { return metric_; }
  const PotentialDescriptor& potential() const { return potential_; }
  double metric_decay() const { return metric_decay_; }
  double potential_decay() const { return potential_decay_; }
  double inner_radius() const { return inner_radius_; }

  bool is_flat() const { return metric_.family == MetricFamily::flat; }
  bool has_zero_potential() const { return potential_.family == PotentialFamily::zero; }
  /// g = psi(r) delta, which admits the closed-form radial Laplace-Beltrami operator.
  bool is_radial_conformal() const;

  double potential_at(double r) const;
  /// e_ij(x) = g_ij(x) - delta_ij, row-major n x n into `out`.
  void metric_perturbation(std::span<const double> x, std::span<double> out) const;
  /// e(x)(u, u) for a unit vector u = x / |x|; cheaper than the full tensor.
  double radial_perturbation(std::span<const double> x) const;
  /// Only for radially conformal charts.
  ConformalProfile conformal_profile(double r) const;

 private:
  int n_;
  MetricDescriptor metric_;
  double metric_decay_;
  PotentialDescriptor potential_;
  double potential_decay_;
  double inner_radius_;
};

}  // namespace qdev::spatial
