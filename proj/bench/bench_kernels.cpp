#include <benchmark/benchmark.h>

#include <random>

#include "refrob/groups.hpp"
#include "refrob/kernels.hpp"

using namespace refrob;

namespace {

MultiPoly dense(int n, int deg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(-9, 9), k(0, 9);
  MultiPoly f(n);
  for (int t = 0; t <= deg; ++t)
    for (const auto& m : monomials_of_degree(n, t)) f += MultiPoly::monomial(m, CycScalar(c(rng)) + zeta(10, k(rng)));
  return f;
}

void BM_multiply_serial(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  const MultiPoly f = dense(4, deg, 1), g = dense(4, deg, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_serial(f, g));
  state.counters["terms"] = static_cast<double>(f.size());
}

void BM_multiply_parallel(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  const MultiPoly f = dense(4, deg, 1), g = dense(4, deg, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::multiply_parallel(f, g));
  state.counters["threads"] = kernels::max_threads();
}

const std::vector<Matrix>& f4_elements() {
  static const auto group = build_group({Family::F4, 4, 0});
  return group->elements();
}

void BM_orbit_sum_serial(benchmark::State& state) {
  const MultiPoly f = dense(4, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::orbit_sum_serial(f, f4_elements()));
}

void BM_orbit_sum_parallel(benchmark::State& state) {
  const MultiPoly f = dense(4, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::orbit_sum_parallel(f, f4_elements()));
}

}  // namespace

BENCHMARK(BM_multiply_serial)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_multiply_parallel)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_orbit_sum_serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_orbit_sum_parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
