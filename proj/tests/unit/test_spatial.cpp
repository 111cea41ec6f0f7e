#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"
#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/field.hpp"
#include "qdev/spatial/flatness.hpp"
#include "qdev/spatial/operator.hpp"
#include "qdev/spatial/radial.hpp"
#include "radial_ode.hpp"

using namespace qdev;
using namespace qdev::spatial;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

BoxGrid cube(std::size_t points, double spacing, double origin = 0.0, std::size_t dim = 3) {
  return BoxGrid{std::vector<std::size_t>(dim, points), spacing, std::vector<double>(dim, origin)};
}

double max_interior_abs(const SpatialField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.is_box() && !is_interior(f.box(), i)) continue;
    if (f.is_radial() && (i == 0 || i + 1 == f.values.size())) continue;
    m = std::max(m, std::abs(f.values[i]));
  }
  return m;
}

SpatialChart lorentzian_chart(int n = 3, double amplitude = 1.0) {
  return SpatialChart::flat(n, {PotentialFamily::lorentzian, amplitude, 0.0}, 2.0);
}

}  // namespace

TEST_CASE("chart construction rejects invalid parameters") {
  CHECK_THROWS_AS(SpatialChart::flat(2), ArgumentError);
  CHECK_THROWS_AS(SpatialChart(3, {}, 0.0, {}, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(SpatialChart(3, {}, 1.0, {}, -1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(SpatialChart(3, {}, 1.0, {}, 1.0, -2.0), ArgumentError);
  CHECK(metric_family_from_string("conformal_power") == MetricFamily::conformal_power);
  CHECK(potential_family_from_string(to_string(PotentialFamily::yukawa)) == PotentialFamily::yukawa);
  CHECK_THROWS_AS(metric_family_from_string("wormhole"), ArgumentError);
}

TEST_CASE("closed-form metric perturbations") {
  const SpatialChart conformal(3, {MetricFamily::conformal_power, 2.0, 1.0}, 1.0, {}, 1.0, 1.0);
  std::vector<double> x{3.0, 0.0, 4.0}, e(9);
  conformal.metric_perturbation(x, e);
  CHECK(e[0] == doctest::Approx(0.4));
  CHECK(e[1] == 0.0);
  CHECK(conformal.radial_perturbation(x) == doctest::Approx(0.4));

  const SpatialChart aniso(3, {MetricFamily::anisotropic, 0.5, 1.0}, 1.0, {}, 1.0, 1.0);
  aniso.metric_perturbation(x, e);
  CHECK(e[2] == doctest::Approx(0.5 * 12.0 / 125.0));
  CHECK(aniso.radial_perturbation(x) == doctest::Approx(0.5 / 5.0));
  CHECK(lorentzian_chart().potential_at(2.0) == doctest::Approx(0.2));
}

TEST_CASE("operator annihilates constants when V vanishes") {
  const SpatialChart chart = SpatialChart::flat(3);
  SpatialField f{cube(6, 0.3), std::vector<cplx>(216, cplx(1.0, 0.0))};
  CHECK(max_interior_abs(apply_A(chart, f)) == 0.0);

  SpatialField radial{RadialGrid{1.0, 0.1, 50}, std::vector<cplx>(50, cplx(2.0, -1.0))};
  CHECK(max_interior_abs(apply_A(chart, radial)) == 0.0);
}

TEST_CASE("radial operator on r^2 in three dimensions") {
  const SpatialChart chart = SpatialChart::flat(3);
  const RadialGrid g{1.0, 0.05, 40};
  SpatialField f{g, {}};
  for (std::size_t j = 0; j < g.count; ++j) f.values.emplace_back(g.radius(j) * g.radius(j), 0.0);
  const auto Af = apply_A(chart, f);
  for (std::size_t j = 1; j + 1 < g.count; ++j) {
    CHECK(Af.values[j].real() == doctest::Approx(-12.0).epsilon(1e-11));
  }
  CHECK(Af.values.front() == cplx(0.0));
  CHECK(Af.values.back() == cplx(0.0));
}

TEST_CASE("discrete plane-wave symbol is exact") {
  const SpatialChart chart = SpatialChart::flat(3);
  const BoxGrid g = cube(12, 0.2, -1.0);
  const std::vector<double> k{1.3, -0.4, 2.2};
  const auto v = plane_wave(g, k);
  const auto Av = apply_A(chart, v);
  const double sym = discrete_symbol(3, 0.2, k);
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (!is_interior(g, i)) continue;
    CHECK(std::abs(Av.values[i] - sym * v.values[i]) < 1e-12 * sym);
  }
}

TEST_CASE("plane-wave residual examples") {
  const SpatialChart chart = SpatialChart::flat(3);
  const BoxGrid g = cube(16, 1.0 / 16);

  const std::vector<double> zero{0.0, 0.0, 0.0};
  const auto r0 = plane_wave_residual(chart, zero, g);
  CHECK(r0.lambda_h == 0.0);
  CHECK(r0.residual == 0.0);

  const std::vector<double> k{1.0, 1.0, 0.0};
  const auto r = plane_wave_residual(chart, k, g);
  CHECK(r.lambda_continuum == doctest::Approx(4.0));
  const double h = 1.0 / 16;
  CHECK(std::abs(r.lambda_h - 4.0) <= 2.0 * 2.0 * h * h / 12.0);
  CHECK(r.lambda_h < 4.0);
  CHECK(r.relative_residual < 1e-12);

  CHECK_THROWS_AS(plane_wave_residual(lorentzian_chart(), k, g), UnsupportedError);
  const std::vector<double> k2{1.0, 1.0};
  CHECK_THROWS_AS(plane_wave_residual(chart, k2, g), ArgumentError);
}

TEST_CASE("discrete symbol approaches the continuum at second order") {
  const std::vector<double> k{2 * kPi, 2 * kPi, 2 * kPi};
  std::vector<double> hs, errs;
  for (std::size_t P : {8, 16, 32, 64}) {
    const double h = 1.0 / static_cast<double>(P);
    const auto r = plane_wave_residual(SpatialChart::flat(3), k, cube(P, h));
    hs.push_back(h);
    errs.push_back(std::abs(r.lambda_h - r.lambda_continuum));
  }
  CHECK(numerics::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("discrete operator is symmetric on compactly supported fields") {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> nd;
  const BoxGrid g = cube(9, 0.4, 0.7);
  auto random_field = [&] {
    SpatialField f{g, std::vector<cplx>(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (is_interior(g, i)) f.values[i] = cplx(nd(rng), nd(rng));
    }
    return f;
  };
  const auto u = random_field();
  const auto v = random_field();
  for (const SpatialChart& chart : {SpatialChart::flat(3), lorentzian_chart(3, 2.0)}) {
    const auto Au = apply_A(chart, u);
    const auto Av = apply_A(chart, v);
    cplx lhs = 0.0, rhs = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      lhs += std::conj(Au.values[i]) * v.values[i];
      rhs += std::conj(u.values[i]) * Av.values[i];
      scale += std::abs(Au.values[i]) * std::abs(v.values[i]);
    }
    CHECK(std::abs(lhs - rhs) < 1e-12 * scale);
  }
}

TEST_CASE("operator rejects incompatible grids and fields") {
  const BoxGrid g2 = cube(5, 0.5, 0.0, 2);
  SpatialField f{g2, std::vector<cplx>(25)};
  CHECK_THROWS_AS(apply_A(SpatialChart::flat(3), f), ArgumentError);
  const SpatialChart curved(3, {MetricFamily::anisotropic, 0.5, 1.0}, 1.0, {}, 1.0, 1.0);
  SpatialField box{cube(5, 0.5), std::vector<cplx>(125)};
  CHECK_THROWS_AS(apply_A(curved, box), UnsupportedError);
  SpatialField radial{RadialGrid{1.0, 0.1, 10}, std::vector<cplx>(10)};
  CHECK_THROWS_AS(apply_A(curved, radial), UnsupportedError);
  SpatialField bad{cube(5, 0.5), std::vector<cplx>(124)};
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad.values.resize(125);
  bad.values[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
}

TEST_CASE("flatness validator: flat chart passes with zero diagnostics") {
  const auto report = validate_asymptotic_flatness(SpatialChart::flat(3), fixture_probe_radii());
  CHECK(report.pass);
  CHECK(report.violated.empty());
  CHECK(report.max_metric_deviation == 0.0);
  CHECK(report.max_derivative_norm == 0.0);
  CHECK(report.max_potential == 0.0);
}

TEST_CASE("flatness validator: (1 + 1/r) delta with a Lorentzian potential") {
  const SpatialChart chart(3, {MetricFamily::conformal_power, 1.0, 1.0}, 1.0,
                           {PotentialFamily::lorentzian, 1.0, 0.0}, 2.0, 4.0);
  const auto radii = fixture_probe_radii();
  const auto report = validate_asymptotic_flatness(chart, radii);
  CHECK(report.pass);
  REQUIRE(report.samples.size() == radii.size());
  for (const auto& s : report.samples) {
    const double r = s.radius;
    // d/dx_k (1 + 1/r) = -x_k / r^3, largest along a coordinate axis.
    CHECK(s.metric_deviation == doctest::Approx(1.0 / r).epsilon(1e-12));
    CHECK(s.derivative_norm == doctest::Approx(1.0 / (r * r)).epsilon(1e-6));
    CHECK(s.potential == doctest::Approx(1.0 / (1.0 + r * r)).epsilon(1e-12));
  }
}

TEST_CASE("flatness validator: r^0.1 delta fails the metric limit") {
  const SpatialChart chart(3, {MetricFamily::power_growth, 0.0, 0.1}, 1.0, {}, 1.0, 4.0);
  const auto report = validate_asymptotic_flatness(chart, fixture_probe_radii());
  CHECK_FALSE(report.pass);
  CHECK(report.violates(FlatnessCondition::metric_limit));
}

TEST_CASE("flatness validator: fixture suite verdicts") {
  std::size_t conforming = 0, violating = 0;
  for (const auto& fx : standard_fixtures()) {
    CAPTURE(fx.name);
    const auto report = validate_asymptotic_flatness(fx.chart, fixture_probe_radii());
    CHECK(report.pass == fx.expected_violations.empty());
    CHECK(report.violated == fx.expected_violations);
    (fx.expected_violations.empty() ? conforming : violating)++;
  }
  CHECK(conforming == 6);
  CHECK(violating == 6);
}

TEST_CASE("flatness validator argument checks") {
  const SpatialChart chart(3, {MetricFamily::conformal_power, 1.0, 1.0}, 1.0, {}, 1.0, 4.0);
  CHECK_THROWS_AS(validate_asymptotic_flatness(chart, std::vector<double>{4, 8, 16, 32}), ArgumentError);
  CHECK_THROWS_AS(validate_asymptotic_flatness(chart, std::vector<double>{8, 16, 32}), ArgumentError);
  CHECK_THROWS_AS(validate_asymptotic_flatness(chart, std::vector<double>{8, 32, 16, 64}), ArgumentError);
  const SpatialChart indefinite(3, {MetricFamily::anisotropic, -2.0, 0.0}, 1.0, {}, 1.0, 1.0);
  CHECK_THROWS_AS(validate_asymptotic_flatness(indefinite, std::vector<double>{2, 4, 8, 16}),
                  ArgumentError);
  const auto d = default_probe_radii(chart);
  CHECK(d.size() == 10);
  CHECK(d.front() == 8.0);
  CHECK(d.back() == 8.0 * 512);
}

TEST_CASE("radial eigenfunction of the free three-dimensional Laplacian") {
  const double k = 1.5;
  const auto ef = radial_generalized_eigenfunction(SpatialChart::flat(3), k, 50.0);
  CHECK(ef.eigenvalue == doctest::Approx(2.0 * k * k));
  const auto& g = ef.field.radial();
  double err = 0.0;
  for (std::size_t j = 0; j < g.count; ++j) {
    const double r = g.radius(j);
    const double exact = r == 0.0 ? 1.0 : std::sin(k * r) / (k * r);
    err = std::max(err, std::abs(ef.field.values[j].real() - exact));
  }
  CHECK(err < 1e-8);
  CHECK(ef.growth.bounded);
}

TEST_CASE("radial eigenfunction with a Lorentzian potential stays bounded") {
  const SpatialChart chart = lorentzian_chart();
  const double k = 1.0;
  const auto ef = radial_generalized_eigenfunction(chart, k, 1000.0);
  CHECK(ef.growth.bounded);
  CHECK(ef.growth.sup_abs <= 1.0 + 1e-12);
  const auto& g = ef.field.radial();
  const std::vector<std::size_t> nodes{g.count / 2000, g.count / 500, g.count / 100, g.count / 10};
  std::vector<double> radii;
  for (std::size_t j : nodes) radii.push_back(g.radius(j));
  const auto ref =
      oracle::radial_solution(3, k, [](double r) { return 1.0 / (1.0 + r * r); }, radii);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(ef.field.values[nodes[i]].real() == doctest::Approx(ref[i]).epsilon(1e-7));
  }
}

TEST_CASE("radial eigenfunction in four dimensions matches the ODE reference") {
  const double k = 2.0;
  const auto ef = radial_generalized_eigenfunction(SpatialChart::flat(4), k, 20.0);
  const auto& g = ef.field.radial();
  const std::vector<std::size_t> nodes{g.count / 20, g.count / 4, g.count - 1};
  std::vector<double> radii;
  for (std::size_t j : nodes) radii.push_back(g.radius(j));
  const auto ref = oracle::radial_solution(4, k, [](double) { return 0.0; }, radii);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(std::abs(ef.field.values[nodes[i]].real() - ref[i]) < 1e-8);
  }
}

TEST_CASE("radial eigenfunction preconditions") {
  CHECK_THROWS_AS(radial_generalized_eigenfunction(SpatialChart::flat(3), 0.0, 10.0), ArgumentError);
  CHECK_THROWS_AS(radial_generalized_eigenfunction(SpatialChart::flat(3), 1.0, -1.0), ArgumentError);
  const SpatialChart curved(3, {MetricFamily::conformal_power, 1.0, 1.0}, 1.0, {}, 1.0, 1.0);
  CHECK_THROWS_AS(radial_generalized_eigenfunction(curved, 1.0, 10.0), UnsupportedError);
  const SpatialChart growing =
      SpatialChart::flat(3, {PotentialFamily::power_law, 0.1, -0.5}, 1.0);
  CHECK_THROWS_AS(radial_generalized_eigenfunction(growing, 1.0, 50.0), PreconditionError);
  const SpatialChart constant = SpatialChart::flat(3, {PotentialFamily::constant, 0.5, 0.0}, 1.0);
  CHECK_THROWS_AS(radial_generalized_eigenfunction(constant, 1.0, 50.0), PreconditionError);
}
