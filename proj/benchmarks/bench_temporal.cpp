#include <benchmark/benchmark.h>

#include <random>

#include "qdev/numerics/eigen.hpp"
#include "qdev/temporal/forms.hpp"
#include "qdev/temporal/spectrum.hpp"

using namespace qdev;

static void BM_TemporalSpectrum(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const temporal::TemporalProblem problem(3, 1.0);
  const double t_max = temporal::default_t_max(problem.forms(), 10);
  for (auto _ : state) {
    auto s = temporal::temporal_spectrum(problem, t_max, N, 10);
    benchmark::DoNotOptimize(s.pairs.back().eigenvalue);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TemporalSpectrum)->RangeMultiplier(2)->Range(256, 8192)->Complexity();

static void BM_TemporalSpectrumRichardson(benchmark::State& state) {
  temporal::SpectrumOptions opt;
  opt.richardson = true;
  for (auto _ : state) {
    auto s = temporal::temporal_spectrum(temporal::kCalibrationPreset,
                                         temporal::Mesh1D::graded(12.0, 1024), 4, opt);
    benchmark::DoNotOptimize(s.pairs.front().eigenvalue);
  }
}
BENCHMARK(BM_TemporalSpectrumRichardson);

static void BM_AssembleForms(benchmark::State& state) {
  const auto mesh = temporal::Mesh1D::graded(6.0, static_cast<std::size_t>(state.range(0)));
  const temporal::TemporalProblem problem(3, 1.0);
  for (auto _ : state) {
    auto f = temporal::assemble_forms(problem, mesh);
    benchmark::DoNotOptimize(f.K.order());
  }
}
BENCHMARK(BM_AssembleForms)->Arg(1024)->Arg(4096);

// Same tridiagonal pencil through both solver paths.
static void eig_path(benchmark::State& state, numerics::EigMethod method) {
  const auto forms = temporal::assemble_forms(temporal::kCalibrationPreset,
                                              temporal::Mesh1D::uniform(12.0, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    auto s = numerics::solve_sym_generalized_eig(forms.B, forms.K, 8, method);
    benchmark::DoNotOptimize(s.values.data());
  }
}
static void BM_EigTridiagonal(benchmark::State& state) { eig_path(state, numerics::EigMethod::tridiagonal); }
static void BM_EigDense(benchmark::State& state) { eig_path(state, numerics::EigMethod::dense); }
BENCHMARK(BM_EigTridiagonal)->Arg(128)->Arg(512);
BENCHMARK(BM_EigDense)->Arg(128)->Arg(512);
