#include <benchmark/benchmark.h>

#include "qdev/quasimode/quasimode.hpp"
#include "qdev/synthesis/synthesis.hpp"

using namespace qdev;

static void BM_QuasimodeResidual(benchmark::State& state) {
  const double R = static_cast<double>(state.range(0));
  const quasimode::QuasimodeSpec spec{1.0, R, R / 2};
  const auto chart = spatial::SpatialChart::flat(3);
  const auto v = quasimode::build_quasimode(spec, chart);
  for (auto _ : state) {
    auto c = quasimode::quasimode_residual(v, spec, chart);
    benchmark::DoNotOptimize(c.epsilon);
  }
}
BENCHMARK(BM_QuasimodeResidual)->Arg(50)->Arg(800);

static void BM_WeylFamily(benchmark::State& state) {
  const auto chart = spatial::SpatialChart::flat(3);
  for (auto _ : state) {
    auto f = quasimode::weyl_family(1.0, static_cast<std::size_t>(state.range(0)), chart);
    benchmark::DoNotOptimize(f.max_epsilon);
  }
}
BENCHMARK(BM_WeylFamily)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_RefinementStudy(benchmark::State& state) {
  synthesis::RefinementOptions opt;
  opt.levels = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto s = synthesis::plane_wave_refinement_study(opt);
    benchmark::DoNotOptimize(s.slope);
  }
}
BENCHMARK(BM_RefinementStudy)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
