#include <benchmark/benchmark.h>

#include "cover_cli/presets.hpp"
#include "covering/catalog.hpp"
#include "covering/model.hpp"
#include "covering/reduce.hpp"

namespace {

using namespace covering;

void BM_VerifyConstruction(benchmark::State& state) {
  const auto system = catalog::construction_6_168();
  for (auto _ : state) benchmark::DoNotOptimize(verify(system));
}
BENCHMARK(BM_VerifyConstruction)->Unit(benchmark::kMillisecond);

void BM_Candidates(benchmark::State& state) {
  const Int m = state.range(0);
  const Int bound = state.range(1);
  EnumerateOptions opts;
  opts.threads = static_cast<unsigned>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_candidates(m, bound, opts));
}
BENCHMARK(BM_Candidates)->Args({5, 1440, 1})->Args({6, 5040, 1})->Args({6, 5040, 4})->Unit(benchmark::kMillisecond);

void BM_Density(benchmark::State& state) {
  Int L = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density(L, 6));
    L = L % 5040 + 1;
  }
}
BENCHMARK(BM_Density);

void BM_BuildMinModulusInstance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cover_cli::build_min_modulus_5_108());
}
BENCHMARK(BM_BuildMinModulusInstance)->Unit(benchmark::kMillisecond);

void BM_ExportLp(benchmark::State& state) {
  const auto model = encode(cover_cli::build_min_modulus_5_108().instance);
  for (auto _ : state) benchmark::DoNotOptimize(export_lp(model));
}
BENCHMARK(BM_ExportLp)->Unit(benchmark::kMillisecond);

void BM_ExportCnf(benchmark::State& state) {
  const auto model = encode(cover_cli::build_min_modulus_5_108().instance);
  for (auto _ : state) benchmark::DoNotOptimize(export_cnf(model));
}
BENCHMARK(BM_ExportCnf)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
