#include "qdev/spatial/operator.hpp"

#include <cmath>
#include <vector>

#include "qdev/errors.hpp"

namespace qdev::spatial {
namespace {

using cplx = std::complex<double>;

SpatialField apply_box(const SpatialChart& chart, const SpatialField& field) {
  const BoxGrid& g = field.box();
  const std::size_t n = g.dimension();
  if (!chart.is_flat()) {
    throw UnsupportedError("apply_A: box grids support only the flat metric");
  }
  if (static_cast<int>(n) != chart.dimension()) {
    throw ArgumentError("apply_A: grid dimension does not match the chart");
  }
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t d = n - 1; d-- > 0;) stride[d] = stride[d + 1] * g.shape[d + 1];

  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const double factor = static_cast<double>(chart.dimension() - 1);
  const bool with_potential = !chart.has_zero_potential();
  SpatialField out{g, std::vector<cplx>(field.values.size(), cplx{})};
  const auto& v = field.values;
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t o = 0; o < v.size(); ++o) {
    // idx tracks the multi-index of o (odometer increment at loop end).
    bool interior = true;
    for (std::size_t d = 0; d < n; ++d) {
      if (idx[d] == 0 || idx[d] + 1 == g.shape[d]) {
        interior = false;
        break;
      }
    }
    if (interior) {
      cplx neg_lap{};
      for (std::size_t d = 0; d < n; ++d) {
        neg_lap += (2.0 * v[o] - v[o + stride[d]] - v[o - stride[d]]);
      }
      neg_lap *= inv_h2;
      if (with_potential) {
        double r2 = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
          const double x = g.origin[d] + g.spacing * static_cast<double>(idx[d]);
          r2 += x * x;
        }
        neg_lap += chart.potential_at(std::sqrt(r2)) * v[o];
      }
      out.values[o] = factor * neg_lap;
    }
    for (std::size_t d = n; d-- > 0;) {
      if (++idx[d] < g.shape[d]) break;
      idx[d] = 0;
    }
  }
  return out;
}

SpatialField apply_radial(const SpatialChart& chart, const SpatialField& field) {
  const RadialGrid& g = field.radial();
  if (!chart.is_radial_conformal()) {
    throw UnsupportedError("apply_A: radial grids need a flat or conformally flat radial metric");
  }
  const double n = chart.dimension();
  const double h = g.spacing;
  SpatialField out{g, std::vector<cplx>(g.count, cplx{})};
  const auto& v = field.values;
  for (std::size_t j = 1; j + 1 < g.count; ++j) {
    const double r = g.radius(j);
    const cplx d1 = (v[j + 1] - v[j - 1]) / (2.0 * h);
    const cplx d2 = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (h * h);
    cplx lap = d2 + (n - 1.0) / r * d1;
    if (!chart.is_flat()) {
      const auto prof = chart.conformal_profile(r);
      if (!(prof.psi > 0.0)) throw ArgumentError("apply_A: metric not positive definite");
      lap = (lap + 0.5 * (n - 2.0) * (prof.dpsi / prof.psi) * d1) / prof.psi;
    }
    out.values[j] = (n - 1.0) * (-lap + chart.potential_at(r) * v[j]);
  }
  return out;
}

}  // namespace

SpatialField apply_A(const SpatialChart& chart, const SpatialField& field) {
  field.validate();
  if (field.is_box()) return apply_box(chart, field);
  return apply_radial(chart, field);
}

SpatialField plane_wave(const BoxGrid& grid, std::span<const double> k) {
  grid.validate();
  const std::size_t n = grid.dimension();
  if (k.size() != n) throw ArgumentError("plane_wave: wavevector dimension mismatch");
  SpatialField out{grid, std::vector<cplx>(grid.size())};
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t o = 0; o < out.values.size(); ++o) {
    double phase = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      phase += k[d] * (grid.origin[d] + grid.spacing * static_cast<double>(idx[d]));
    }
    out.values[o] = std::polar(1.0, phase);
    for (std::size_t d = n; d-- > 0;) {
      if (++idx[d] < grid.shape[d]) break;
      idx[d] = 0;
    }
  }
  return out;
}

double discrete_symbol(int n, double spacing, std::span<const double> k) {
  double s = 0.0;
  for (double kd : k) {
    const double half = std::sin(0.5 * kd * spacing);
    s += 4.0 * half * half / (spacing * spacing);
  }
  return (n - 1) * s;
}

PlaneWaveResidual plane_wave_residual(const SpatialChart& chart, std::span<const double> k,
                                      const BoxGrid& grid) {
  if (!chart.is_flat() || !chart.has_zero_potential()) {
    throw UnsupportedError("plane_wave_residual: needs a flat chart with V = 0");
  }
  const auto v = plane_wave(grid, k);
  const auto av = apply_A(chart, v);
  PlaneWaveResidual out;
  out.lambda_h = discrete_symbol(chart.dimension(), grid.spacing, k);
  double k2 = 0.0;
  for (double kd : k) k2 += kd * kd;
  out.lambda_continuum = (chart.dimension() - 1) * k2;
  for (std::size_t o = 0; o < v.values.size(); ++o) {
    if (!is_interior(grid, o)) continue;
    out.residual = std::max(out.residual, std::abs(av.values[o] - out.lambda_h * v.values[o]));
  }
  out.relative_residual =
      out.lambda_continuum > 0.0 ? out.residual / out.lambda_continuum : out.residual;
  return out;
}

}  // namespace qdev::spatial
