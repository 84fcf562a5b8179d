#include <benchmark/benchmark.h>

#include "cover_cli/presets.hpp"
#include "covering/solver.hpp"

namespace {

using namespace covering;

// One survivor lcm with its stored fixings; args: minimum modulus, index.
void BM_SolveCandidate(benchmark::State& state) {
  const Int m = state.range(0);
  const auto& c = cover_cli::candidate_fixings(m).at(static_cast<std::size_t>(state.range(1)));
  const auto instance = build_instance(cover_cli::lcm_problem_moduli(c.lcm, m), c.fixed);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto out = solve(instance);
    nodes = out.nodes;
    benchmark::DoNotOptimize(out.verdict);
  }
  state.SetLabel("L=" + std::to_string(c.lcm));
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_SolveCandidate)
    ->Args({5, 0})
    ->Args({5, 7})
    ->Args({6, 6})
    ->Args({6, 10})
    ->Unit(benchmark::kMillisecond);

void BM_SolveKrukenberg(benchmark::State& state) {
  const Int hi = state.range(0);
  const auto instance = build_instance(lemma1_discard(ModuliMultiset::range(3, hi), hi).multiset, {});
  for (auto _ : state) benchmark::DoNotOptimize(solve(instance).verdict);
}
BENCHMARK(BM_SolveKrukenberg)->Arg(35)->Arg(36)->Unit(benchmark::kMillisecond);

void BM_SymmetryOff(benchmark::State& state) {
  const auto& c = cover_cli::candidate_fixings(5).front();
  const auto instance = build_instance(cover_cli::lcm_problem_moduli(c.lcm, 5), c.fixed);
  SolveOptions opts;
  opts.symmetry_breaking = false;
  for (auto _ : state) benchmark::DoNotOptimize(solve(instance, opts).verdict);
}
BENCHMARK(BM_SymmetryOff)->Unit(benchmark::kMillisecond);

}  // namespace
