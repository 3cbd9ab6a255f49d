// Serial reference kernels against their OpenMP counterparts.
// The second argument selects the kernel: 0 = serial, otherwise the OpenMP worker count.

#include <benchmark/benchmark.h>

#include <cmath>

#include "affdim/affinity.hpp"
#include "affdim/attractor.hpp"
#include "affdim/ifs.hpp"
#include "affdim/verify.hpp"

using namespace affdim;

namespace {

Exec exec_of(const benchmark::State& state) {
  const auto workers = static_cast<int>(state.range(1));
  return workers == 0 ? Exec::serial() : Exec::with_threads(workers);
}

Ifs worked_example() {
  return Ifs({AffineMap(Matrix{{0.5, 0.0}, {0.5, 0.5}}, Vector{0.0, 0.0}),
              AffineMap(Matrix{{0.5, 0.5}, {0.0, 0.5}}, Vector{0.0, 0.0})});
}

CondensationSet circle() { return CondensationSet(2, {Circle{Vector{0.75, 0.75}, 0.2}}); }

System normalized_example() { return normalize(make_system(worked_example(), circle())).system; }

void BM_PressureSum(benchmark::State& state) {
  const Ifs ifs = worked_example();
  const PressureOptions opts{kDefaultLeafBudget, exec_of(state)};
  const auto k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pressure_sum(ifs, k, 1.37, opts));
}

void BM_StoppingSet(benchmark::State& state) {
  const Ifs ifs = worked_example();
  const double delta = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stopping_set(ifs, 2, delta, kDefaultWordBudget, exec_of(state)));
}

void BM_Orbital(benchmark::State& state) {
  const System s = normalized_example();
  const double delta = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const GenOptions opts{kDefaultWordBudget, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(orbital(s, delta, opts));
}

void BM_HomogeneousGasket(benchmark::State& state) {
  const Matrix h{{0.5, 0.0}, {0.0, 0.5}};
  const Ifs ifs({AffineMap(h, Vector{0.0, 0.0}), AffineMap(h, Vector{0.5, 0.0}), AffineMap(h, Vector{0.0, 0.5})});
  const BoundingBall ball{Vector{0.5, 0.5}, 1.0};
  const double delta = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const GenOptions opts{kDefaultWordBudget, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(homogeneous(ifs, ball, delta, default_anchor(ifs), opts));
}

void BM_Projection(benchmark::State& state) {
  const CondensationSet c = circle();
  const auto angles = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(projection_measure(c, angles, kProjectionDelta, exec_of(state)));
}

void BM_Kappa(benchmark::State& state) {
  const System s = make_system(worked_example(), circle());
  const std::vector<double> deltas{std::ldexp(1.0, -static_cast<int>(state.range(0)))};
  const KappaOptions opts{kDefaultWordBudget, exec_of(state)};
  for (auto _ : state) benchmark::DoNotOptimize(kappa_condition(s, deltas, opts));
}

}  // namespace

BENCHMARK(BM_PressureSum)->ArgsProduct({{12, 16}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StoppingSet)->ArgsProduct({{10, 12}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Orbital)->ArgsProduct({{9, 11}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HomogeneousGasket)->ArgsProduct({{9, 11}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Projection)->ArgsProduct({{90, 720}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kappa)->ArgsProduct({{8, 10}, {0, 1, 2, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
