#include "qdev/quasimode/quasimode.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"
#include "qdev/spatial/flatness.hpp"

namespace qdev::quasimode {

using spatial::RadialGrid;
using spatial::SpatialChart;
using spatial::SpatialField;

BumpJet bump_jet(BumpProfile profile, double s) {
  switch (profile) {
    case BumpProfile::polynomial4: {
      if (std::abs(s) >= 1.0) return {};
      const double q = 1.0 - s * s;
      const double q2 = q * q;
      return {q2 * q2, -8.0 * s * q2 * q, -8.0 * q2 * q + 48.0 * s * s * q2};
    }
  }
  throw ArgumentError("bump_jet: unknown profile");
}

void QuasimodeSpec::validate() const {
  if (!(k >= 0.0) || !std::isfinite(k)) throw ArgumentError("QuasimodeSpec: k must be >= 0");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ArgumentError("QuasimodeSpec: half width must be positive");
  }
  if (!(inner_edge() > 0.0) || !std::isfinite(center)) {
    throw ArgumentError("QuasimodeSpec: support must stay away from the origin");
  }
}

double ResidualCertificate::quadrature_sum() const {
  return std::sqrt(curvature * curvature + cross * cross + geometric * geometric +
                   potential * potential);
}

ResidualCertificate ResidualCertificate::scaled_for_operator() const {
  ResidualCertificate out = *this;
  const double f = dimension - 1.0;
  out.epsilon *= f;
  out.curvature *= f;
  out.cross *= f;
  out.geometric *= f;
  out.potential *= f;
  return out;
}

namespace {

std::complex<double> sample(const QuasimodeSpec& spec, double r) {
  const double s = (r - spec.center) / spec.half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  return bump_jet(spec.bump, s).value * std::polar(1.0, spec.k * r);
}

void fill(const QuasimodeSpec& spec, SpatialField& field) {
  const auto& grid = field.radial();
  field.values.resize(grid.count);
  for (std::size_t j = 0; j < grid.count; ++j) field.values[j] = sample(spec, grid.radius(j));
}

void require_flat_chart(const SpatialChart& chart) {
  const auto radii = spatial::default_probe_radii(chart);
  if (!spatial::validate_asymptotic_flatness(chart, radii).pass) {
    throw PreconditionError("quasimode: chart fails the asymptotic flatness validator");
  }
}

std::size_t node_count(const QuasimodeSpec& spec, const QuasimodeOptions& options, double extent) {
  if (!(options.points_per_wavelength >= kMinPointsPerWavelength)) {
    throw ArgumentError("quasimode: points per wavelength below the residual minimum");
  }
  std::size_t nodes = std::max<std::size_t>(options.min_nodes, 2);
  if (spec.k > 0.0) {
    const double h = 2.0 * std::numbers::pi / spec.k / options.points_per_wavelength;
    nodes = std::max(nodes, static_cast<std::size_t>(std::ceil(extent / h)) + 1);
  }
  return nodes;
}

}  // namespace

SpatialField build_quasimode(const QuasimodeSpec& spec, const SpatialChart& chart,
                             const QuasimodeOptions& options) {
  spec.validate();
  if (!(spec.inner_edge() > chart.inner_radius())) {
    throw ArgumentError("build_quasimode: annulus overlaps the inner region");
  }
  require_flat_chart(chart);
  const double extent = 2.0 * spec.half_width;
  const std::size_t nodes = node_count(spec, options, extent);
  SpatialField field;
  field.grid = RadialGrid{spec.inner_edge(), extent / static_cast<double>(nodes - 1), nodes};
  fill(spec, field);
  return field;
}

ResidualCertificate quasimode_residual(const QuasimodeSpec& spec, int dimension,
                                       const std::function<double(double)>& potential,
                                       double cell_width) {
  spec.validate();
  if (dimension < 1) throw ArgumentError("quasimode_residual: dimension must be >= 1");
  if (!(cell_width > 0.0)) throw ArgumentError("quasimode_residual: cell width must be positive");
  if (spec.k > 0.0 && 2.0 * std::numbers::pi / spec.k / cell_width < kMinPointsPerWavelength) {
    throw ResolutionError("quasimode_residual: fewer than 32 points per wavelength");
  }

  static const numerics::GaussRule rule = numerics::gauss_legendre(8);
  const double lo = spec.inner_edge();
  const double width = 2.0 * spec.half_width;
  const auto cells = static_cast<std::size_t>(std::ceil(width / cell_width * (1.0 - 1e-12)));
  const double h = width / static_cast<double>(cells);
  const double g = dimension - 1.0;
  const double k = spec.k;
  const double inv_w = 1.0 / spec.half_width;

  double norm2 = 0, total2 = 0, curv2 = 0, cross2 = 0, geo2 = 0, pot2 = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = lo + h * static_cast<double>(c);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = a + 0.5 * h * (rule.nodes[q] + 1.0);
      const double w = 0.5 * h * rule.weights[q] * std::pow(r, g);
      const BumpJet jet = bump_jet(spec.bump, (r - spec.center) * inv_w);
      const double b = jet.value;
      const double b1 = jet.d1 * inv_w;
      const double b2 = jet.d2 * inv_w * inv_w;
      const double vr = potential(r);
      // e^{-ikr} (-Laplacian + V - k^2) v, split into real and imaginary parts.
      const double re = -b2 - g / r * b1 + vr * b;
      const double im = -2.0 * k * b1 - g / r * k * b;
      norm2 += w * b * b;
      total2 += w * (re * re + im * im);
      curv2 += w * b2 * b2;
      cross2 += w * 4.0 * k * k * b1 * b1;
      geo2 += w * g * g / (r * r) * (b1 * b1 + k * k * b * b);
      pot2 += w * vr * vr * b * b;
    }
  }

  ResidualCertificate cert;
  cert.k = spec.k;
  cert.center = spec.center;
  cert.half_width = spec.half_width;
  cert.dimension = dimension;
  cert.norm = std::sqrt(norm2);
  cert.epsilon = std::sqrt(total2 / norm2);
  cert.curvature = std::sqrt(curv2 / norm2);
  cert.cross = std::sqrt(cross2 / norm2);
  cert.geometric = std::sqrt(geo2 / norm2);
  cert.potential = std::sqrt(pot2 / norm2);
  return cert;
}

ResidualCertificate quasimode_residual(const SpatialField& v, const QuasimodeSpec& spec,
                                       const SpatialChart& chart) {
  spec.validate();
  if (!chart.is_flat()) throw UnsupportedError("quasimode_residual: flat metric required");
  if (!v.is_radial()) throw ArgumentError("quasimode_residual: radial field required");
  v.validate();
  const auto& grid = v.radial();
  const double slack = 1e-9 * spec.outer_edge();
  if (grid.r0 > spec.inner_edge() + slack || grid.r_max() < spec.outer_edge() - slack) {
    throw ArgumentError("quasimode_residual: field grid does not cover the support");
  }
  for (std::size_t j = 0; j < grid.count; ++j) {
    if (std::abs(v.values[j] - sample(spec, grid.radius(j))) > 1e-12) {
      throw ArgumentError("quasimode_residual: field does not match the quasimode parameters");
    }
  }
  return quasimode_residual(spec, chart.dimension(),
                            [&chart](double r) { return chart.potential_at(r); }, grid.spacing);
}

WeylFamily weyl_family(double k, std::size_t count, const SpatialChart& chart,
                       const WeylOptions& options) {
  if (count == 0) throw ArgumentError("weyl_family: count must be >= 1");
  if (!(options.width_ratio > 0.0) || !(options.width_ratio < 1.0 / 3.0)) {
    throw ArgumentError("weyl_family: width ratio must lie in (0, 1/3)");
  }
  const double last_center = std::ldexp(options.base_radius, static_cast<int>(count) - 1);
  const double outer = last_center * (1.0 + options.width_ratio);
  if (!(outer <= options.r_max)) {
    throw CapacityError("weyl_family: annuli exceed the radial extent");
  }

  WeylFamily family;
  for (std::size_t j = 0; j < count; ++j) {
    QuasimodeSpec spec;
    spec.k = k;
    spec.center = std::ldexp(options.base_radius, static_cast<int>(j));
    spec.half_width = options.width_ratio * spec.center;
    spec.validate();
    if (!(spec.inner_edge() > chart.inner_radius())) {
      throw ArgumentError("weyl_family: annulus overlaps the inner region");
    }
    family.specs.push_back(spec);
  }
  require_flat_chart(chart);

  const double inner = family.specs.front().inner_edge();
  const std::size_t nodes = node_count(family.specs.front(), options.sampling, outer - inner);
  const RadialGrid grid{inner, (outer - inner) / static_cast<double>(nodes - 1), nodes};
  for (const auto& spec : family.specs) {
    SpatialField field;
    field.grid = grid;
    fill(spec, field);
    family.certificates.push_back(quasimode_residual(field, spec, chart));
    family.max_epsilon = std::max(family.max_epsilon, family.certificates.back().epsilon);
    family.fields.push_back(std::move(field));
  }

  const double g = chart.dimension() - 1.0;
  family.gram.assign(count * count, 0.0);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      std::complex<double> sum = 0.0;
      for (std::size_t j = 0; j < nodes; ++j) {
        sum += std::conj(family.fields[a].values[j]) * family.fields[b].values[j] *
               std::pow(grid.radius(j), g);
      }
      family.gram[a * count + b] = std::abs(sum) * grid.spacing;
    }
  }
  return family;
}

}  // namespace qdev::quasimode
