#pragma once

#include <functional>
#include <vector>

#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/field.hpp"

namespace qdev::quasimode {

enum class BumpProfile {
  polynomial4,  // (1 - s^2)^4 on |s| <= 1
};

/// Value and first two derivatives of the bump in its own variable s.
struct BumpJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

BumpJet bump_jet(BumpProfile profile, double s);

/// v(r) = bump((r - center) / half_width) * exp(i k r), targeting the
/// spectral parameter k^2 of -Laplacian + V.
struct QuasimodeSpec {
  double k = 1.0;
  double center = 10.0;
  double half_width = 5.0;
  BumpProfile bump = BumpProfile::polynomial4;

  double inner_edge() const { return center - half_width; }
  double outer_edge() const { return center + half_width; }
  /// Throws ArgumentError for k < 0, half_width <= 0 or a support reaching r <= 0.
  void validate() const;
};

/// Sampling used by build_quasimode.
struct QuasimodeOptions {
  double points_per_wavelength = 64.0;
  std::size_t min_nodes = 257;
};

/// Minimum resolution accepted by the residual measurement.
inline constexpr double kMinPointsPerWavelength = 32.0;

struct ResidualCertificate {
  double k = 0.0;
  double center = 0.0;
  double half_width = 0.0;
  int dimension = 0;
  double epsilon = 0.0;  // ||(-Laplacian + V - k^2) v|| / ||v||
  // Each relative to ||v||.
  double curvature = 0.0;  // envelope second derivative
  double cross = 0.0;      // 2 k times the envelope slope
  double geometric = 0.0;  // (n - 1) / r times the radial derivative
  double potential = 0.0;  // V v
  double norm = 0.0;       // ||v|| with volume element r^(n-1) dr

  /// Root sum of squares of the four components.
  double quadrature_sum() const;
  /// The certificate for A = (n - 1)(-Laplacian + V) at (n - 1) k^2.
  ResidualCertificate scaled_for_operator() const;
};

/// Samples the quasimode on a radial grid spanning exactly its support.
/// Throws ArgumentError if the support reaches the inner radius and
/// PreconditionError if the chart fails the flatness validator.
spatial::SpatialField build_quasimode(const QuasimodeSpec& spec, const spatial::SpatialChart& chart,
                                      const QuasimodeOptions& options = {});

/// Residual of a sampled quasimode on a flat-metric chart.
/// Throws ResolutionError below kMinPointsPerWavelength, ArgumentError if the
/// field grid does not cover the support or disagrees with the spec, and
/// UnsupportedError for a curved metric.
ResidualCertificate quasimode_residual(const spatial::SpatialField& v, const QuasimodeSpec& spec,
                                       const spatial::SpatialChart& chart);

/// Residual in any radial dimension >= 1, with quadrature cells of the given width.
ResidualCertificate quasimode_residual(const QuasimodeSpec& spec, int dimension,
                                       const std::function<double(double)>& potential,
                                       double cell_width);

struct WeylOptions {
  double base_radius = 20.0;
  double width_ratio = 0.3;
  double r_max = 1e4;
  QuasimodeOptions sampling{};
};

/// Quasimodes on the disjoint annuli R_j = base * 2^j, W_j = width_ratio * R_j,
/// all sampled on one common radial grid.
struct WeylFamily {
  std::vector<QuasimodeSpec> specs;
  std::vector<spatial::SpatialField> fields;
  std::vector<ResidualCertificate> certificates;
  std::vector<double> gram;  // row-major, discrete L2 with weight r^(n-1)
  double max_epsilon = 0.0;
};

/// Throws ArgumentError for count == 0 and CapacityError when the outermost
/// annulus passes options.r_max.
WeylFamily weyl_family(double k, std::size_t count, const spatial::SpatialChart& chart,
                       const WeylOptions& options = {});

}  // namespace qdev::quasimode
