#include <cmc/continuation.hpp>
#include <cmc/geometry.hpp>
#include <cmc/shooting.hpp>

#include <benchmark/benchmark.h>

namespace {

const cmc::FamilyParams p31 = cmc::FamilyParams::from_nl(3, 1);
constexpr double kA = 0.187605416347, kT = 1.15925493474;

void BM_Evaluate(benchmark::State& state) {
  const cmc::ToleranceSpec tol = cmc::ShootingOptions{}.ode;
  for (auto _ : state) benchmark::DoNotOptimize(cmc::evaluate(kA, 0.0, kT, p31, tol));
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMicrosecond);

void BM_Jacobian(benchmark::State& state) {
  const cmc::ToleranceSpec tol = cmc::ShootingOptions{}.ode;
  for (auto _ : state) benchmark::DoNotOptimize(cmc::jacobian(kA, 0.0, kT, p31, tol));
}
BENCHMARK(BM_Jacobian)->Unit(benchmark::kMicrosecond);

void BM_FindSeed(benchmark::State& state) {
  const auto p = cmc::FamilyParams::from_nl(static_cast<int>(state.range(0)),
                                            static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(cmc::find_seed(p, 0.0, {0.01, 0.95}));
}
BENCHMARK(BM_FindSeed)->Args({3, 1})->Args({7, 3})->Args({12, 5})->Unit(benchmark::kMillisecond);

void BM_TraceFamily(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cmc::trace_family(p31));
}
BENCHMARK(BM_TraceFamily)->Unit(benchmark::kMillisecond)->Iterations(3);

// Reconstruction plus quadrature; argument is the half-period interval count.
void BM_Volume(benchmark::State& state) {
  const auto seed = cmc::find_seed(p31, 0.0, {0.05, 0.5});
  for (auto _ : state) {
    const auto curve = cmc::reconstruct(seed, p31, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(cmc::volume(curve));
  }
}
BENCHMARK(BM_Volume)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
