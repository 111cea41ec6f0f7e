#include <benchmark/benchmark.h>

#include <numbers>

#include "qdev/spatial/flatness.hpp"
#include "qdev/spatial/operator.hpp"
#include "qdev/spatial/radial.hpp"

using namespace qdev::spatial;

static void BM_ApplyBox(benchmark::State& state) {
  const auto P = static_cast<std::size_t>(state.range(0));
  const BoxGrid grid{{P, P, P}, 1.0 / static_cast<double>(P), {0.0, 0.0, 0.0}};
  const double k0 = 2.0 * std::numbers::pi;
  const std::vector<double> k{k0, 2 * k0, 3 * k0};
  const auto v = plane_wave(grid, k);
  const auto chart = SpatialChart::flat(3);
  for (auto _ : state) {
    auto Av = apply_A(chart, v);
    benchmark::DoNotOptimize(Av.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_ApplyBox)->Arg(16)->Arg(32)->Arg(64);

static void BM_FlatnessFixtures(benchmark::State& state) {
  const auto fixtures = standard_fixtures();
  const auto radii = fixture_probe_radii();
  for (auto _ : state) {
    for (const auto& fx : fixtures) {
      auto r = validate_asymptotic_flatness(fx.chart, radii);
      benchmark::DoNotOptimize(r.pass);
    }
  }
}
BENCHMARK(BM_FlatnessFixtures)->Unit(benchmark::kMillisecond);

static void BM_RadialEigenfunction(benchmark::State& state) {
  const auto chart = SpatialChart::flat(3, {PotentialFamily::lorentzian, 1.0, 0.0}, 2.0);
  const double r_max = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto ef = radial_generalized_eigenfunction(chart, 1.0, r_max);
    benchmark::DoNotOptimize(ef.growth.sup_abs);
  }
}
BENCHMARK(BM_RadialEigenfunction)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
