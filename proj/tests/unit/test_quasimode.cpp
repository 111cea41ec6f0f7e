#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "polynomial.hpp"
#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"
#include "qdev/quasimode/quasimode.hpp"
#include "qdev/spatial/chart.hpp"
#include "qdev/spatial/flatness.hpp"

using namespace qdev;
using namespace qdev::quasimode;
using qdev::spatial::SpatialChart;

namespace {

constexpr double kPi = std::numbers::pi;

SpatialChart lorentzian_chart() {
  return SpatialChart::flat(3, {spatial::PotentialFamily::lorentzian, 1.0, 0.0}, 2.0);
}

QuasimodeSpec make_spec(double k, double R, double W) {
  QuasimodeSpec s;
  s.k = k;
  s.center = R;
  s.half_width = W;
  return s;
}

ResidualCertificate certify(const QuasimodeSpec& spec, const SpatialChart& chart) {
  return quasimode_residual(build_quasimode(spec, chart), spec, chart);
}

// One-dimensional residual in closed form: with s = (r - R)/W and V constant,
// (-d^2/dr^2 + V - k^2) v = (-b''/W^2 + V b - 2 i k b'/W) e^{ikr}.
struct ClosedForm {
  double epsilon, curvature, cross, potential;
};

ClosedForm one_dimensional_residual(double k, double W, double V) {
  const auto b = oracle::bump_polynomial();
  const auto b1 = b.derivative();
  const auto b2 = b1.derivative();
  const double norm2 = (b * b).integral_unit();
  const auto real_part = (-1.0 / (W * W)) * b2 + V * b;
  const double num = (real_part * real_part).integral_unit() +
                     4.0 * k * k / (W * W) * (b1 * b1).integral_unit();
  return {std::sqrt(num / norm2),
          std::sqrt((b2 * b2).integral_unit() / norm2) / (W * W),
          2.0 * k / W * std::sqrt((b1 * b1).integral_unit() / norm2),
          std::abs(V)};
}

}  // namespace

TEST_CASE("bump jet matches the expanded polynomial") {
  const auto b = oracle::bump_polynomial();
  const auto b1 = b.derivative();
  const auto b2 = b1.derivative();
  for (double s = -1.0; s <= 1.0; s += 0.0625) {
    const auto j = bump_jet(BumpProfile::polynomial4, s);
    CHECK(j.value == doctest::Approx(b(s)).epsilon(1e-14));
    CHECK(std::abs(j.d1 - b1(s)) < 1e-13);
    CHECK(std::abs(j.d2 - b2(s)) < 1e-12);
  }
  const auto outside = bump_jet(BumpProfile::polynomial4, 1.5);
  CHECK(outside.value == 0.0);
  CHECK(outside.d1 == 0.0);
  CHECK(outside.d2 == 0.0);
}

TEST_CASE("sampled quasimode equals the plane wave at the centre and vanishes at the edges") {
  const auto spec = make_spec(1.0, 10.0, 5.0);
  const auto v = build_quasimode(spec, SpatialChart::flat(3));
  const auto& g = v.radial();
  CHECK(g.r0 == doctest::Approx(5.0));
  CHECK(g.r_max() == doctest::Approx(15.0));
  CHECK(v.values.front() == std::complex<double>(0.0));
  CHECK(v.values.back() == std::complex<double>(0.0));
  REQUIRE(g.count % 2 == 1);
  const auto mid = v.values[g.count / 2];
  CHECK(std::abs(mid - std::polar(1.0, 10.0)) < 1e-14);
  CHECK(2.0 * kPi / g.spacing >= 64.0);
}

TEST_CASE("one-dimensional residual agrees with the closed form") {
  for (double k : {0.0, 1.0, 3.0}) {
    for (double V : {0.0, 0.3}) {
      const auto spec = make_spec(k, 10.0, 5.0);
      const double cell = k > 0 ? 2.0 * kPi / k / 64.0 : 0.05;
      const auto cert = quasimode_residual(spec, 1, [V](double) { return V; }, cell);
      const auto ref = one_dimensional_residual(k, 5.0, V);
      CAPTURE(k);
      CAPTURE(V);
      CHECK(cert.epsilon == doctest::Approx(ref.epsilon).epsilon(1e-6));
      CHECK(cert.curvature == doctest::Approx(ref.curvature).epsilon(1e-6));
      CHECK(cert.cross == doctest::Approx(ref.cross).epsilon(1e-6));
      CHECK(cert.potential == doctest::Approx(ref.potential).epsilon(1e-6));
      CHECK(cert.geometric == 0.0);
    }
  }
}

TEST_CASE("residual decays like 1/R for V = 0 and a Lorentzian potential") {
  const std::vector<double> radii{50, 100, 200, 400, 800};
  for (const SpatialChart& chart : {SpatialChart::flat(3), lorentzian_chart()}) {
    std::vector<double> eps;
    for (double R : radii) {
      const auto spec = make_spec(1.0, R, R / 2);
      const auto cert = certify(spec, chart);
      CHECK(cert.potential <= chart.potential_at(spec.inner_edge()) + 1e-15);
      CHECK(cert.quadrature_sum() == doctest::Approx(cert.epsilon).epsilon(0.1));
      eps.push_back(cert.epsilon);
    }
    for (std::size_t i = 1; i < eps.size(); ++i) CHECK(eps[i] < eps[i - 1]);
    CHECK(numerics::loglog_slope(radii, eps) == doctest::Approx(-1.0).epsilon(0.1));
  }
}

TEST_CASE("epsilon times R settles for several wavenumbers") {
  for (double k : {0.5, 1.0, 2.0}) {
    const double a = certify(make_spec(k, 200.0, 100.0), SpatialChart::flat(3)).epsilon * 200.0;
    const double b = certify(make_spec(k, 800.0, 400.0), SpatialChart::flat(3)).epsilon * 800.0;
    CAPTURE(k);
    CHECK(b == doctest::Approx(a).epsilon(0.05));
  }
}

TEST_CASE("zero wavenumber: real field and curvature-dominated residual") {
  const auto spec = make_spec(0.0, 40.0, 20.0);
  const auto v = build_quasimode(spec, SpatialChart::flat(3));
  for (const auto& x : v.values) CHECK(x.imag() == 0.0);
  const auto cert = quasimode_residual(v, spec, SpatialChart::flat(3));
  CHECK(cert.cross == 0.0);
  CHECK(cert.curvature > cert.potential);
  CHECK(cert.epsilon > 0.0);
}

TEST_CASE("certificate for the rescaled operator") {
  const auto cert = certify(make_spec(1.0, 100.0, 50.0), SpatialChart::flat(4));
  const auto scaled = cert.scaled_for_operator();
  CHECK(scaled.epsilon == doctest::Approx(3.0 * cert.epsilon));
  CHECK(scaled.k == cert.k);
}

TEST_CASE("under-resolved sampling is refused") {
  const auto spec = make_spec(1.0, 100.0, 50.0);
  CHECK_THROWS_AS(quasimode_residual(spec, 3, [](double) { return 0.0; }, 2.0 * kPi / 31.0),
                  ResolutionError);
  CHECK_NOTHROW(quasimode_residual(spec, 3, [](double) { return 0.0; }, 2.0 * kPi / 33.0));

  spatial::SpatialField coarse;
  const std::size_t count = 401;
  coarse.grid = spatial::RadialGrid{spec.inner_edge(), 100.0 / (count - 1), count};
  for (std::size_t j = 0; j < count; ++j) {
    const double r = coarse.radial().radius(j);
    coarse.values.push_back(bump_jet(spec.bump, (r - spec.center) / spec.half_width).value *
                            std::polar(1.0, r));
  }
  CHECK_THROWS_AS(quasimode_residual(coarse, spec, SpatialChart::flat(3)), ResolutionError);
  QuasimodeOptions thin;
  thin.points_per_wavelength = 16.0;
  CHECK_THROWS_AS(build_quasimode(spec, SpatialChart::flat(3), thin), ArgumentError);
}

TEST_CASE("quasimode argument and chart checks") {
  CHECK_THROWS_AS(make_spec(-1.0, 10.0, 5.0).validate(), ArgumentError);
  CHECK_THROWS_AS(make_spec(1.0, 10.0, 0.0).validate(), ArgumentError);
  CHECK_THROWS_AS(make_spec(1.0, 10.0, 10.0).validate(), ArgumentError);

  const auto spec = make_spec(1.0, 100.0, 50.0);
  auto v = build_quasimode(spec, SpatialChart::flat(3));
  auto tampered = v;
  tampered.values[10] += 1e-6;
  CHECK_THROWS_AS(quasimode_residual(tampered, spec, SpatialChart::flat(3)), ArgumentError);
  CHECK_THROWS_AS(quasimode_residual(v, make_spec(1.0, 100.0, 60.0), SpatialChart::flat(3)),
                  ArgumentError);

  for (const auto& fx : spatial::standard_fixtures()) {
    if (fx.name == "constant_potential") {
      CHECK_THROWS_AS(build_quasimode(spec, fx.chart), PreconditionError);
    }
    if (fx.name == "conformal_inverse_r") {
      CHECK_THROWS_AS(build_quasimode(make_spec(1.0, 5.0, 2.0), fx.chart), ArgumentError);
      CHECK_THROWS_AS(quasimode_residual(v, spec, fx.chart), UnsupportedError);
    }
  }
}

TEST_CASE("Weyl family of one member reproduces the single certificate") {
  const auto family = weyl_family(1.0, 1, SpatialChart::flat(3));
  REQUIRE(family.certificates.size() == 1);
  const auto single = certify(make_spec(1.0, 20.0, 6.0), SpatialChart::flat(3));
  CHECK(family.certificates[0].epsilon == doctest::Approx(single.epsilon).epsilon(1e-12));
  CHECK(family.max_epsilon == family.certificates[0].epsilon);
  CHECK(family.gram[0] > 0.0);
}

TEST_CASE("Weyl family of four members has a diagonal Gram matrix") {
  for (const SpatialChart& chart : {SpatialChart::flat(3), lorentzian_chart()}) {
    const auto family = weyl_family(1.0, 4, chart);
    REQUIRE(family.gram.size() == 16);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        if (a == b) {
          CHECK(family.gram[a * 4 + b] > 0.0);
        } else {
          CHECK(family.gram[a * 4 + b] == 0.0);
        }
      }
      if (a > 0) CHECK(family.certificates[a].epsilon < family.certificates[a - 1].epsilon);
    }
  }
}

TEST_CASE("Weyl family scaling and capacity") {
  WeylOptions wide;
  wide.base_radius = 40.0;
  const auto near = weyl_family(1.0, 3, SpatialChart::flat(3));
  const auto far = weyl_family(1.0, 3, SpatialChart::flat(3), wide);
  CHECK(far.max_epsilon < near.max_epsilon);
  CHECK(far.max_epsilon == doctest::Approx(near.max_epsilon / 2).epsilon(0.1));

  CHECK_THROWS_AS(weyl_family(1.0, 10, SpatialChart::flat(3)), CapacityError);
  CHECK_THROWS_AS(weyl_family(1.0, 0, SpatialChart::flat(3)), ArgumentError);
  WeylOptions overlapping;
  overlapping.width_ratio = 0.4;
  CHECK_THROWS_AS(weyl_family(1.0, 2, SpatialChart::flat(3), overlapping), ArgumentError);
}
