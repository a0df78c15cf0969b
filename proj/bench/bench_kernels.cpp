// Serial reference vs OpenMP kernel, one pair per parallel loop.
// Run with --benchmark_filter=... and TANGLEKIT_THREADS / OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "tanglekit/core.hpp"
#include "tanglekit/generators.hpp"
#include "tanglekit/guide.hpp"
#include "tanglekit/hitting_set.hpp"
#include "tanglekit/order.hpp"
#include "tanglekit/witness.hpp"

using namespace tanglekit;

namespace {

const InstanceBundle& m5() {
  static const InstanceBundle b = gen_min_order(5);
  return b;
}

SystemPtr random_system(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PointSet> sides;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  while (sides.size() < m) {
    const std::uint64_t w = rng() & full;
    if (w != 0 && w != full) sides.push_back(PointSet::from_word(n, w));
  }
  return make_system(GroundSet::make(n), sides).system;
}

const SystemPtr& enum_system() {
  static const SystemPtr s = random_system(12, 20, 3);
  return s;
}

const SystemPtr& ordered_full() {
  static const SystemPtr s = min_side_order(all_separations(GroundSet::make(11))).attach();
  return s;
}

std::vector<PointSet> hitting_family() {
  std::mt19937_64 rng(5);
  std::vector<PointSet> family;
  for (int i = 0; i < 60; ++i) {
    PointSet s(40);
    for (int j = 0; j < 6; ++j) s.set(rng() % 40);
    family.push_back(s);
  }
  return family;
}

}  // namespace

static void BM_Consistency_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::is_consistent(*m5().system, m5().tangle.orientation()));
}
static void BM_Consistency_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(is_consistent(*m5().system, m5().tangle.orientation()));
}

static void BM_Enumerate_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::enumerate_tangles(enum_system()));
}
static void BM_Enumerate_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_tangles(enum_system()));
}

static void BM_Submodular_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(serial::is_submodular(*ordered_full()));
}
static void BM_Submodular_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(is_submodular(*ordered_full()));
}

static void BM_HittingSet_Serial(benchmark::State& st) {
  const auto family = hitting_family();
  for (auto _ : st) benchmark::DoNotOptimize(serial::minimum_hitting_set(40, family));
}
static void BM_HittingSet_Parallel(benchmark::State& st) {
  const auto family = hitting_family();
  for (auto _ : st) benchmark::DoNotOptimize(minimum_hitting_set(40, family));
}

static void BM_Inductive_Serial(benchmark::State& st) {
  const InstanceBundle b = gen_min_order(3);
  for (auto _ : st) benchmark::DoNotOptimize(serial::inductive_witnessing(b.tangle, *b.full_system, 3));
}
static void BM_Inductive_Parallel(benchmark::State& st) {
  const InstanceBundle b = gen_min_order(3);
  for (auto _ : st) benchmark::DoNotOptimize(inductive_witnessing(b.tangle, *b.full_system, 3));
}

static void BM_Sampler_Serial(benchmark::State& st) {
  const InstanceBundle b = gen_triples(7);
  const GuidingFunction g = GuidingFunction::uniform(b.system->ground_size());
  for (auto _ : st) benchmark::DoNotOptimize(serial::sample_guiding_set(b.tangle, g, {1, 4000}));
}
static void BM_Sampler_Parallel(benchmark::State& st) {
  const InstanceBundle b = gen_triples(7);
  const GuidingFunction g = GuidingFunction::uniform(b.system->ground_size());
  for (auto _ : st) benchmark::DoNotOptimize(sample_guiding_set(b.tangle, g, {1, 4000}));
}

BENCHMARK(BM_Consistency_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Consistency_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Enumerate_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Submodular_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Submodular_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingSet_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HittingSet_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Inductive_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Inductive_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampler_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sampler_Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
