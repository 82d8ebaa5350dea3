// Serial vs OpenMP kernels: breadth-first reachability and the game solver's root fan-out.

#include <benchmark/benchmark.h>

#include "bisimlab/game/solver.hpp"
#include "bisimlab/pcp/reduction.hpp"
#include "bisimlab/pds/semantics.hpp"

using namespace bisimlab;

namespace {

const pcp::ReductionOutput& reduction(int which, int order) {
  static const auto e1_1 = pcp::build_reduction(pcp::PcpInstance::validate({{"A", "AA"}}), {1});
  static const auto e2_1 = pcp::build_reduction(pcp::PcpInstance::validate({{"A", "AB"}, {"B", "BA"}}), {1});
  static const auto e2_2 = pcp::build_reduction(pcp::PcpInstance::validate({{"A", "AB"}, {"B", "BA"}}), {2});
  static const auto e3_2 = pcp::build_reduction(pcp::PcpInstance::validate({{"A", "ABA"}, {"BA", "BAB"}}), {2});
  if (which == 1) return e1_1;
  if (which == 3) return e3_2;
  return order == 1 ? e2_1 : e2_2;
}

void BM_Reachable(benchmark::State& state) {
  const auto& r = reduction(2, 1);
  const int depth = static_cast<int>(state.range(0));
  const bool parallel = state.range(1) != 0;
  std::size_t n = 0;
  for (auto _ : state) {
    const auto reach = parallel ? pds::reachable_parallel(*r.lts, r.start.left, depth, 5'000'000)
                                : pds::reachable(*r.lts, r.start.left, depth, 5'000'000);
    n = reach.configs.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["configs"] = static_cast<double>(n);
  state.SetLabel(parallel ? "parallel" : "serial");
}
BENCHMARK(BM_Reachable)->ArgsProduct({{10, 14, 18}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Decide(benchmark::State& state) {
  const int which = static_cast<int>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  const bool parallel = state.range(2) != 0;
  const auto& r = reduction(which, 2);
  for (auto _ : state) {
    const auto v = game::decide_game(r.lts, r.start, depth, {.parallel = parallel});
    benchmark::DoNotOptimize(v.depth);
  }
  state.SetLabel(std::string(which == 3 ? "E3" : "E2") + (parallel ? " parallel" : " serial"));
}
BENCHMARK(BM_Decide)->ArgsProduct({{2, 3}, {40}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_DecideReference(benchmark::State& state) {
  const auto& r = reduction(1, 1);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto v = game::decide_game_reference(*r.lts, r.start, depth);
    benchmark::DoNotOptimize(v.depth);
  }
  state.SetLabel("E1 reference");
}
BENCHMARK(BM_DecideReference)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
