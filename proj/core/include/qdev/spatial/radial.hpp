#pragma once

#include "qdev/numerics/ode.hpp"
#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/field.hpp"

namespace qdev::spatial {

struct RadialOptions {
  double points_per_wavelength = 64.0;
  double max_spacing = 0.05;
  numerics::StepControl control{1e-12, 1e-14, 1e-4, 50'000'000};
};

/// Amplitude diagnostics of an s-wave profile. The envelope is
/// E(r) = sqrt(u^2 + (u'/k)^2) with u = r^((n-1)/2) v, which is constant
/// for a free wave in three dimensions.
struct GrowthReport {
  double sup_abs = 0.0;
  double envelope_start = 0.0;  // at r_max / 2
  double envelope_end = 0.0;    // at r_max
  double envelope_drift = 0.0;  // (max - min) / mean of E over [r_max / 2, r_max]
  bool bounded = false;         // envelope_drift < kEnvelopeDriftTolerance
};

inline constexpr double kEnvelopeDriftTolerance = 1e-2;

struct RadialEigenfunction {
  SpatialField field;  // real samples, v(0) = 1
  std::vector<double> derivative;
  double eigenvalue = 0.0;  // (n - 1) k^2, the spectral value of A
  GrowthReport growth;
};

/// Integrates -v'' - (n-1)/r v' + V v = k^2 v outward from the origin with
/// v(0) = 1, v'(0) = 0, sampling on a uniform grid over [0, r_max].
/// Requires a flat chart (UnsupportedError), k > 0 and r_max > 0
/// (ArgumentError), and a potential that does not grow (PreconditionError).
RadialEigenfunction radial_generalized_eigenfunction(const SpatialChart& chart, double k,
                                                     double r_max, const RadialOptions& options = {});

}  // namespace qdev::spatial
