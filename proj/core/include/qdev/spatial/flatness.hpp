#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdev/spatial/chart.hpp"

namespace qdev::spatial {

/// The four decay requirements on an asymptotically Euclidean chart.
enum class FlatnessCondition {
  metric_limit,            // g_ij -> delta_ij
  metric_derivative_limit, // g_ij,k -> 0
  distance_comparability,  // c r <= |x| <= r / c
  potential_limit,         // V -> 0
};

std::string_view to_string(FlatnessCondition condition);

/// Sup-norms over the probe directions of one sphere |x| = radius.
struct ProbeSample {
  double radius = 0.0;
  double metric_deviation = 0.0;  // max |g_ij - delta_ij|
  double derivative_norm = 0.0;   // max |g_ij,k|
  double distance_slope = 0.0;    // max |d log(rho / r) / d log r|, rho the radial path length
  double potential = 0.0;         // |V|
};

struct FlatnessReport {
  bool pass = false;
  double max_metric_deviation = 0.0;
  double max_derivative_norm = 0.0;
  double max_distance_slope = 0.0;
  double max_potential = 0.0;
  std::vector<FlatnessCondition> violated;
  std::vector<ProbeSample> samples;

  bool violates(FlatnessCondition c) const;
};

/// Safety factor applied to the fitted tolerance curve.
inline constexpr double kFlatnessSlack = 4.0;
/// Sequences whose sup never exceeds this are treated as identically zero.
inline constexpr double kFlatnessFloor = 1e-10;

/// Probes the chart on spheres of the given radii (26 directions each, the
/// nonzero vertices of {-1,0,1}^3 in the first three coordinates).
///
/// Each diagnostic sequence is replaced by its tail supremum M_k and must stay
/// below kFlatnessSlack * C * r^(-q/2), with C fitted from the first two radii
/// and q the declared decay rate, and must strictly decrease overall.
/// Requires at least 4 ascending radii beyond inner_radius; throws
/// ArgumentError otherwise or if the metric is not positive definite at a probe.
FlatnessReport validate_asymptotic_flatness(const SpatialChart& chart,
                                            std::span<const double> probe_radii);

/// Ten radii base * 2^k with base = max(2 * inner_radius, 2).
std::vector<double> default_probe_radii(const SpatialChart& chart);

/// A named chart with its expected verdict, used by the fixture suite and
/// the command line.
struct ChartFixture {
  std::string name;
  SpatialChart chart;
  std::vector<FlatnessCondition> expected_violations;
};

/// Six conforming and six violating three-dimensional charts.
std::vector<ChartFixture> standard_fixtures();
/// Radii used with standard_fixtures(): perfect squares from 16 to 3600.
std::vector<double> fixture_probe_radii();

}  // namespace qdev::spatial
