#include <benchmark/benchmark.h>

#include <random>

#include "redfrac/gcdgraph.hpp"

using namespace redfrac;

namespace {

GcdGraph dense_instance(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const uint64_t ps[4] = {2, 3, 5, 7};
  GcdGraph g;
  auto label = [&rng, &ps] {
    uint64_t v = 1;
    for (int i = 0; i < 8 && rng() % 3 != 0; ++i) v *= ps[rng() % 4];
    return v;
  };
  for (size_t i = 0; i < n; ++i) g.V.push_back(label());
  for (size_t i = 0; i < n; ++i) g.W.push_back(label());
  g.normalize();
  for (uint64_t v : g.V)
    for (uint64_t w : g.W)
      if (rng() % 4 != 0) g.E.push_back({v, w});
  if (g.E.empty()) g.E.push_back({g.V[0], g.W[0]});
  for (uint64_t v : g.V) g.mu.weight.emplace(v, make_rat((long)(rng() % 16 + 1), 4));
  for (uint64_t w : g.W) g.mu.weight.emplace(w, make_rat((long)(rng() % 16 + 1), 4));
  g.normalize();
  return g;
}

void BM_Quality(benchmark::State& state) {
  GcdGraph g = dense_instance(12, 7);
  for (auto _ : state) benchmark::DoNotOptimize(quality(g).exact);
}
BENCHMARK(BM_Quality);

void BM_FindPair(benchmark::State& state) {
  GcdGraph g = dense_instance(12, 7);
  auto R = remaining_primes(g);
  if (R.empty()) state.SkipWithError("no remaining primes");
  for (auto _ : state) benchmark::DoNotOptimize(find_pair(g, R.front()).ratio_pow10);
}
BENCHMARK(BM_FindPair);

void BM_GreedyEmptyR(benchmark::State& state) {
  GcdGraph g = dense_instance(12, 7);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_empty_r(g).first.primes.size());
}
BENCHMARK(BM_GreedyEmptyR);

void BM_Pipeline(benchmark::State& state) {
  GcdGraph g = dense_instance(10, 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(good_subgraph_pipeline(g, Rat(1), Rat(10), 2).second.pruned);
}
BENCHMARK(BM_Pipeline);

}  // namespace
