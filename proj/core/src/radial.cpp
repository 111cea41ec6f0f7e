#include "qdev/spatial/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdev/errors.hpp"

namespace qdev::spatial {
namespace {

void require_nongrowing_potential(const SpatialChart& chart, double r_max) {
  const double far = std::abs(chart.potential_at(r_max));
  const double mid = std::abs(chart.potential_at(0.25 * r_max));
  if (far > 0.0 && !(far < mid)) {
    throw PreconditionError("radial_generalized_eigenfunction: potential does not decay");
  }
}

}  // namespace

RadialEigenfunction radial_generalized_eigenfunction(const SpatialChart& chart, double k,
                                                     double r_max, const RadialOptions& options) {
  if (!chart.is_flat()) {
    throw UnsupportedError("radial_generalized_eigenfunction: flat chart required");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ArgumentError("radial_generalized_eigenfunction: k must be positive");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw ArgumentError("radial_generalized_eigenfunction: r_max must be positive");
  }
  if (!(options.points_per_wavelength >= 8.0) || !(options.max_spacing > 0.0)) {
    throw ArgumentError("radial_generalized_eigenfunction: invalid sampling options");
  }
  require_nongrowing_potential(chart, r_max);

  const int n = chart.dimension();
  const double dim = n;
  const double wavelength = 2.0 * std::numbers::pi / k;
  const double target = std::min(options.max_spacing, wavelength / options.points_per_wavelength);
  const auto intervals = static_cast<std::size_t>(std::ceil(r_max / target));
  const RadialGrid grid{0.0, r_max / static_cast<double>(intervals), intervals + 1};

  auto rhs = [&](double r, const std::array<double, 2>& y) {
    const double shift = chart.potential_at(r) - k * k;
    return std::array<double, 2>{y[1], -(dim - 1.0) / r * y[1] + shift * y[0]};
  };

  RadialEigenfunction out;
  out.eigenvalue = (dim - 1.0) * k * k;
  out.field.grid = grid;
  out.field.values.resize(grid.count);
  out.derivative.resize(grid.count);
  out.field.values[0] = 1.0;
  out.derivative[0] = 0.0;

  // Regular series start v = 1 + (V(0) - k^2) r^2 / (2n).
  const double r_start = std::min(1e-4 / std::max(k, 1.0), 0.5 * grid.spacing);
  const double c = (chart.potential_at(0.0) - k * k) / (2.0 * dim);
  std::array<double, 2> y{1.0 + c * r_start * r_start, 2.0 * c * r_start};
  numerics::DormandPrince<2> stepper(options.control);
  double r = r_start;
  for (std::size_t j = 1; j < grid.count; ++j) {
    const double next = grid.radius(j);
    stepper.advance(rhs, r, next, y);
    r = next;
    out.field.values[j] = y[0];
    out.derivative[j] = y[1];
  }

  GrowthReport& g = out.growth;
  double e_min = INFINITY, e_max = 0.0, e_sum = 0.0;
  std::size_t e_count = 0;
  for (std::size_t j = 0; j < grid.count; ++j) {
    const double v = out.field.values[j].real();
    g.sup_abs = std::max(g.sup_abs, std::abs(v));
    const double rj = grid.radius(j);
    if (rj < 0.5 * r_max) continue;
    const double scale = std::pow(rj, 0.5 * (dim - 1.0));
    const double u = scale * v;
    const double du = scale * (out.derivative[j] + 0.5 * (dim - 1.0) / rj * v);
    const double e = std::hypot(u, du / k);
    if (e_count == 0) g.envelope_start = e;
    g.envelope_end = e;
    e_min = std::min(e_min, e);
    e_max = std::max(e_max, e);
    e_sum += e;
    ++e_count;
  }
  const double mean = e_sum / static_cast<double>(e_count);
  g.envelope_drift = mean > 0.0 ? (e_max - e_min) / mean : INFINITY;
  g.bounded = std::isfinite(g.sup_abs) && g.envelope_drift < kEnvelopeDriftTolerance;
  return out;
}

}  // namespace qdev::spatial
