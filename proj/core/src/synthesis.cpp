#include "qdev/synthesis/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"
#include "qdev/spatial/operator.hpp"

namespace qdev::synthesis {

using spatial::BoxGrid;
using spatial::RadialGrid;
using spatial::SpatialField;

std::vector<SpectralMatch> match_eigenvalues(std::span<const temporal::GeneralizedEigenpair> temporal,
                                             int n, double tolerance) {
  if (n < 3) throw ArgumentError("match_eigenvalues: n must be >= 3");
  if (!(tolerance >= 0.0)) throw ArgumentError("match_eigenvalues: tolerance must be >= 0");
  std::vector<SpectralMatch> out;
  for (const auto& pair : temporal) {
    double lambda = pair.eigenvalue;
    if (!(lambda >= -tolerance)) {
      throw ConsistencyError("match_eigenvalues: negative temporal eigenvalue");
    }
    lambda = std::max(lambda, 0.0);
    out.push_back({pair.index, lambda, true, std::sqrt(lambda / (n - 1.0))});
  }
  return out;
}

EvalGrid strided_eval_grid(const temporal::Mesh1D& mesh, const spatial::Grid& grid,
                           std::size_t time_stride, std::size_t space_stride) {
  if (time_stride == 0 || space_stride == 0) {
    throw ArgumentError("strided_eval_grid: strides must be positive");
  }
  EvalGrid out;
  for (std::size_t a = time_stride; a < mesh.elements(); a += time_stride) {
    out.time_nodes.push_back(a);
  }
  if (const auto* box = std::get_if<BoxGrid>(&grid)) {
    for (std::size_t off = 0; off < box->size(); ++off) {
      if (!spatial::is_interior(*box, off)) continue;
      const auto idx = spatial::unravel(*box, off);
      if (std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return i % space_stride == 0; })) {
        out.space_nodes.push_back(off);
      }
    }
  } else {
    const auto& radial = std::get<RadialGrid>(grid);
    for (std::size_t j = space_stride; j + 1 < radial.count; j += space_stride) {
      out.space_nodes.push_back(j);
    }
  }
  return out;
}

std::complex<double> WaveProduct::value(std::size_t time_node, std::size_t space_node) const {
  return temporal.coefficients.at(time_node) * spatial.values.at(space_node);
}

WaveProduct WaveProduct::scaled(double s) const {
  WaveProduct out = *this;
  for (auto& v : out.spatial.values) v *= s;
  return out;
}

WaveProduct synthesize_product(const temporal::FormCoefficients& coefficients,
                               const temporal::Mesh1D& mesh,
                               const temporal::GeneralizedEigenpair& temporal,
                               const spatial::SpatialChart& chart, SpatialField v,
                               double spatial_parameter, EvalGrid grid, MatchPolicy policy) {
  v.validate();
  if (temporal.coefficients.size() != mesh.nodes().size()) {
    throw ArgumentError("synthesize_product: temporal coefficients do not match the mesh");
  }
  const double gap = std::abs(temporal.eigenvalue - spatial_parameter);
  if (policy.enforce && gap > policy.tolerance * std::max(1.0, std::abs(temporal.eigenvalue))) {
    throw MatchingError("synthesize_product: temporal and spatial spectral values differ");
  }
  for (std::size_t a : grid.time_nodes) {
    if (a == 0 || a >= mesh.elements()) {
      throw ArgumentError("synthesize_product: time node outside the open interval");
    }
  }
  const auto av = spatial::apply_A(chart, v);
  double defect = 0.0, scale = 0.0;
  for (std::size_t b : grid.space_nodes) {
    if (b >= v.values.size()) throw ArgumentError("synthesize_product: space node out of range");
    if (const auto* box = std::get_if<BoxGrid>(&v.grid); box && !spatial::is_interior(*box, b)) {
      throw ArgumentError("synthesize_product: space node on the boundary");
    }
    if (v.is_radial() && (b == 0 || b + 1 >= v.values.size())) {
      throw ArgumentError("synthesize_product: space node on the boundary");
    }
    defect = std::max(defect, std::abs(av.values[b] - spatial_parameter * v.values[b]));
    scale = std::max(scale, std::abs(v.values[b]));
  }
  const double denom = spatial_parameter > 0.0 ? spatial_parameter * scale : 1.0;
  return WaveProduct{coefficients,
                     mesh,
                     temporal,
                     chart,
                     std::move(v),
                     spatial_parameter,
                     denom > 0.0 ? defect / denom : 0.0,
                     std::move(grid)};
}

WaveResidual wave_residual(const WaveProduct& u) {
  const auto av = spatial::apply_A(u.chart, u.spatial);
  const auto t = u.mesh.nodes();
  const auto& w = u.temporal.coefficients;
  const auto& c = u.coefficients;

  WaveResidual out;
  for (std::size_t a : u.grid.time_nodes) {
    const double hm = t[a] - t[a - 1];
    const double hp = t[a + 1] - t[a];
    const double wdd = 2.0 * ((w[a + 1] - w[a]) / hp - (w[a] - w[a - 1]) / hm) / (hm + hp);
    const double time_coeff = c.stiffness * wdd;
    const double op_coeff = std::pow(t[a], c.weight_exponent) * w[a];
    const double pot_coeff = c.potential * t[a] * t[a] * w[a];
    for (std::size_t b : u.grid.space_nodes) {
      const std::complex<double> v = u.spatial.values[b];
      const std::complex<double> r = time_coeff * v + op_coeff * av.values[b] - pot_coeff * v;
      out.max_abs = std::max(out.max_abs, std::abs(r));
      out.time_term = std::max(out.time_term, std::abs(time_coeff * v));
      out.operator_term = std::max(out.operator_term, std::abs(op_coeff * av.values[b]));
      out.potential_term = std::max(out.potential_term, std::abs(pot_coeff * v));
    }
  }
  const double scale = std::max({out.time_term, out.operator_term, out.potential_term});
  out.relative = scale > 0.0 ? out.max_abs / scale : 0.0;
  return out;
}

RefinementStudy plane_wave_refinement_study(const RefinementOptions& options) {
  if (options.levels < 2) throw ArgumentError("plane_wave_refinement_study: at least 2 levels");
  if (!(options.spatial_factor > 0.0)) {
    throw ArgumentError("plane_wave_refinement_study: spatial factor must be positive");
  }
  const int n = options.dimension;
  const auto chart = spatial::SpatialChart::flat(n);
  RefinementStudy study;
  std::vector<double> widths, residuals;
  for (std::size_t l = 0; l < options.levels; ++l) {
    const std::size_t stride = std::size_t{1} << l;
    const std::size_t elements = options.base_time_elements * stride;
    const std::size_t intervals = options.base_space_intervals * stride;
    const auto mesh = temporal::Mesh1D::uniform(options.t_max, elements);
    const auto spectrum =
        temporal::temporal_spectrum(options.coefficients, mesh, options.index + 1);
    const auto& pair = spectrum.pairs.at(options.index);

    const double lambda_a = options.spatial_factor * pair.eigenvalue;
    const double k_component = std::sqrt(lambda_a / ((n - 1.0) * n));
    BoxGrid box;
    box.shape.assign(static_cast<std::size_t>(n), intervals + 1);
    box.spacing = options.box_length / static_cast<double>(intervals);
    box.origin.assign(static_cast<std::size_t>(n), 0.0);
    const std::vector<double> k(static_cast<std::size_t>(n), k_component);
    auto v = spatial::plane_wave(box, k);

    auto grid = strided_eval_grid(mesh, box, stride, stride);
    MatchPolicy policy;
    policy.enforce = options.spatial_factor == 1.0;
    const auto product =
        synthesize_product(options.coefficients, mesh, pair, chart, std::move(v), lambda_a,
                           std::move(grid), policy);
    const auto residual = wave_residual(product);
    study.levels.push_back({elements, intervals, pair.eigenvalue, residual.relative});
    widths.push_back(1.0 / static_cast<double>(stride));
    residuals.push_back(residual.relative);
  }
  study.slope = numerics::loglog_slope(widths, residuals);
  return study;
}

}  // namespace qdev::synthesis
