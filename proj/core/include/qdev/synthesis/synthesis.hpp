#pragma once

#include <span>
#include <vector>

#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/field.hpp"
#include "qdev/temporal/problem.hpp"
#include "qdev/temporal/spectrum.hpp"

namespace qdev::synthesis {

/// A temporal eigenvalue read as a spectral value of A = (n - 1)(-Laplacian + V).
struct SpectralMatch {
  std::size_t index = 0;
  double eigenvalue = 0.0;
  bool admissible = false;
  /// k = sqrt(eigenvalue / (n - 1)).
  double wavenumber = 0.0;
};

/// Every eigenvalue >= 0 lies in the essential spectrum of A and is admissible.
/// Values in [-tolerance, 0) are treated as 0; anything lower throws
/// ConsistencyError.
std::vector<SpectralMatch> match_eigenvalues(std::span<const temporal::GeneralizedEigenpair> temporal,
                                             int n, double tolerance = 1e-12);

/// Interior temporal and spatial nodes on which a product is evaluated.
struct EvalGrid {
  std::vector<std::size_t> time_nodes;   // mesh node indices, never 0 or the last node
  std::vector<std::size_t> space_nodes;  // flat field offsets, interior only
};

/// Interior temporal nodes with index divisible by time_stride, and interior
/// spatial nodes whose every index is divisible by space_stride. Strides of
/// 2^l on an l-times refined grid select the nodes of the coarse grid.
EvalGrid strided_eval_grid(const temporal::Mesh1D& mesh, const spatial::Grid& grid,
                           std::size_t time_stride, std::size_t space_stride);

struct MatchPolicy {
  double tolerance = 1e-6;  // relative
  bool enforce = true;
};

/// u(t, x) = w(t) v(x), kept in separated form.
struct WaveProduct {
  temporal::FormCoefficients coefficients;
  temporal::Mesh1D mesh;
  temporal::GeneralizedEigenpair temporal;
  spatial::SpatialChart chart;
  spatial::SpatialField spatial;
  double spatial_parameter = 0.0;  // lambda_A
  /// max |A v - lambda_A v| / (lambda_A max |v|) on the spatial evaluation nodes
  /// (absolute when lambda_A = 0).
  double spatial_residual = 0.0;
  EvalGrid grid;

  std::complex<double> value(std::size_t time_node, std::size_t space_node) const;
  /// Multiplies the spatial factor, and so u, by s.
  WaveProduct scaled(double s) const;
};

/// Throws MatchingError when |lambda_i - lambda_A| > tolerance * max(1, lambda_i)
/// under an enforcing policy, ArgumentError for grid nodes outside the interior.
WaveProduct synthesize_product(const temporal::FormCoefficients& coefficients,
                               const temporal::Mesh1D& mesh,
                               const temporal::GeneralizedEigenpair& temporal,
                               const spatial::SpatialChart& chart, spatial::SpatialField v,
                               double spatial_parameter, EvalGrid grid, MatchPolicy policy = {});

struct WaveResidual {
  double max_abs = 0.0;
  double relative = 0.0;  // max_abs / max(term maxima), 0 for u = 0
  double time_term = 0.0;       // max |a w'' v|
  double operator_term = 0.0;   // max |t^p w A v|
  double potential_term = 0.0;  // max |c t^2 w v|
};

/// R = a w'' v + t^p w (A v) - c t^2 w v with w'' by central differences on
/// the mesh, the separated wave equation at Lambda = -|Lambda|.
WaveResidual wave_residual(const WaveProduct& u);

struct RefinementOptions {
  temporal::FormCoefficients coefficients = temporal::kCalibrationPreset;
  double t_max = 12.0;
  std::size_t index = 0;
  int dimension = 3;
  std::size_t base_time_elements = 128;
  std::size_t base_space_intervals = 8;
  double box_length = 4.0;
  std::size_t levels = 4;
  /// lambda_A = factor * lambda_i; 1 is the matched product.
  double spatial_factor = 1.0;
};

struct RefinementLevel {
  std::size_t time_elements = 0;
  std::size_t space_intervals = 0;
  double temporal_eigenvalue = 0.0;
  double relative_residual = 0.0;
};

struct RefinementStudy {
  std::vector<RefinementLevel> levels;
  /// Log-log slope of the residual against the mesh width.
  double slope = 0.0;
};

/// Temporal mode on uniform meshes times a flat plane wave along the box
/// diagonal with (n - 1)|k|^2 = spatial_factor * lambda_i, both grids halved
/// per level and evaluated on the nodes of the coarsest level.
RefinementStudy plane_wave_refinement_study(const RefinementOptions& options);

}  // namespace qdev::synthesis
