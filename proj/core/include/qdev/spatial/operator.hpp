#pragma once

#include <span>

#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/field.hpp"

namespace qdev::spatial {

/// A v = (n - 1)(-Delta_g v + V v) on interior nodes by second-order central
/// differences. Boundary nodes of the result are zero.
///
/// Box grids need a flat chart whose dimension matches the grid. Radial grids
/// use -v'' - ((n - 1)/r) v' for the flat metric and the closed-form
/// Laplace-Beltrami operator of g = psi(r) delta for conformal charts.
/// Throws ArgumentError for incompatible grids, UnsupportedError for charts
/// without a discrete operator on the given grid.
SpatialField apply_A(const SpatialChart& chart, const SpatialField& field);

/// exp(i k.x) sampled on the grid.
SpatialField plane_wave(const BoxGrid& grid, std::span<const double> k);

/// (n - 1) sum_d (4 / h^2) sin^2(k_d h / 2): the eigenvalue of the
/// difference stencil on a plane wave.
double discrete_symbol(int n, double spacing, std::span<const double> k);

struct PlaneWaveResidual {
  double lambda_h = 0.0;           // discrete symbol
  double lambda_continuum = 0.0;   // (n - 1)|k|^2
  double residual = 0.0;           // max |A v - lambda_h v| over interior nodes
  double relative_residual = 0.0;  // residual / lambda_continuum (residual itself for k = 0)
};

/// Certifies exp(i k.x) as a discrete generalized eigenfunction of A on a
/// flat chart with V = 0. Throws UnsupportedError otherwise.
PlaneWaveResidual plane_wave_residual(const SpatialChart& chart, std::span<const double> k,
                                      const BoxGrid& grid);

}  // namespace qdev::spatial
