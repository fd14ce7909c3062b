#include <benchmark/benchmark.h>

#include "revnorm/integrator.hpp"
#include "revnorm/lie.hpp"
#include "revnorm/model.hpp"
#include "revnorm/pseudonorm.hpp"
#include "revnorm/resonance.hpp"

using namespace revnorm;

namespace {

const NonlinearTerm kCubic{2, 0, 1.0};

void BM_LieDerivative(benchmark::State& state) {
  const auto m = build_nls_model(1, static_cast<int>(state.range(0)), 7, {kCubic});
  const auto norm = sobolev_norm_polynomial(*m.set, 2.0);
  const auto& f = m.fields.at(1);
  for (auto _ : state) benchmark::DoNotOptimize(lie_derivative(f, norm));
  state.counters["terms"] = static_cast<double>(lie_derivative(f, norm).size());
}
BENCHMARK(BM_LieDerivative)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_BuildPseudonorm(benchmark::State& state) {
  const auto m = build_nls_model(1, 6, 7, {kCubic});
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_pseudonorm(m.fields, m.omega, 2.0, r));
}
BENCHMARK(BM_BuildPseudonorm)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BuildPseudonormD2(benchmark::State& state) {
  const auto m = build_nls_model(2, 4, 7, {kCubic});
  for (auto _ : state) benchmark::DoNotOptimize(build_pseudonorm(m.fields, m.omega, 2.0, 4));
}
BENCHMARK(BM_BuildPseudonormD2)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_IntegratorSteps(benchmark::State& state) {
  const auto m = state.range(0) == 0 ? build_nls_model(1, 6, 7, {kCubic})
                                     : build_coupled_nls_model(1, 6, {7, 8}, {{2, 1, 1.0}}, {{1, 1, 1.0}});
  auto z0 = random_real_direction(m.set, 2.0, 11);
  for (auto& v : z0.values()) v *= 0.05;
  IntegratorOptions o;
  o.dt = 0.02;
  o.stride = 100;
  o.estimate_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(m, z0, 2.0, o));
  state.SetItemsProcessed(state.iterations() * 100);
  state.SetLabel(m.kind);
}
BENCHMARK(BM_IntegratorSteps)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ScanNonresonance(benchmark::State& state) {
  const auto m = build_free_model(static_cast<int>(state.range(0)), 3, 7);
  ScanOptions o;
  o.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(scan_nonresonance(m.omega, 4, 1e-8, o));
}
BENCHMARK(BM_ScanNonresonance)->Args({1, 1})->Args({2, 1})->Args({2, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
