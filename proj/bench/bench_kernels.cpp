#include <benchmark/benchmark.h>

#include "gptlab/ideal.hpp"
#include "gptlab/symmetry.hpp"
#include "gptlab/uncertainty.hpp"
#include "gptlab/verify.hpp"

using namespace gptlab;

namespace {

Exec policy(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

// One LP per vertex of the 64-gon.
void BM_WernerDistance(benchmark::State& state) {
  const auto t = psi_transform(make_polygon(64));
  const auto f = perpendicular_ideal_pair(t).first;
  const auto approx = fuzzify(f, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(werner_distance(t, approx, f, policy(state)));
  label(state);
}
BENCHMARK(BM_WernerDistance)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// A user-kind copy forces the backtracking search instead of the closed-form dihedral group.
void BM_AutomorphismSearch(benchmark::State& state) {
  auto t = make_polygon(static_cast<int>(state.range(1)));
  t.kind = TheoryKind::user;
  for (auto _ : state) benchmark::DoNotOptimize(automorphism_group_search(t, policy(state)));
  label(state);
}
BENCHMARK(BM_AutomorphismSearch)->Args({0, 24})->Args({1, 24})->Args({0, 48})->Args({1, 48})->Unit(benchmark::kMillisecond);

void BM_TheoremBattery(benchmark::State& state) {
  const auto t = make_polygon(7);
  BatterySpec spec;
  spec.joints = 10;
  spec.seed = 11;
  for (auto _ : state) benchmark::DoNotOptimize(run_theorem_battery(t, spec, policy(state)));
  label(state);
}
BENCHMARK(BM_TheoremBattery)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
