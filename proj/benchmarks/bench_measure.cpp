#include <benchmark/benchmark.h>

#include "redfrac/experiments.hpp"
#include "redfrac/measure.hpp"

using namespace redfrac;

namespace {

void BM_ApproxSet(benchmark::State& state) {
  const uint32_t q = static_cast<uint32_t>(state.range(0));
  Sieve sieve(q);
  PsiFunction psi = generate_psi("constant:1/2", q);
  for (auto _ : state) {
    TorusIntervalUnion u = approx_set(q, psi, sieve);
    benchmark::DoNotOptimize(u.measure());
  }
}
BENCHMARK(BM_ApproxSet)->Arg(210)->Arg(2310)->Arg(5000);

void BM_OverlapExact(benchmark::State& state) {
  const uint32_t q = 119, r = 120;
  Sieve sieve(r);
  PsiFunction psi = generate_psi("constant:1/2", r);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_exact(q, r, psi, sieve));
}
BENCHMARK(BM_OverlapExact);

void BM_OverlapCrt(benchmark::State& state) {
  PsiFunction psi = generate_psi("constant:1/2", 120);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_crt(119, 120, psi));
}
BENCHMARK(BM_OverlapCrt);

void BM_SecondMomentSweep(benchmark::State& state) {
  const uint32_t Q = static_cast<uint32_t>(state.range(0));
  Sieve sieve(Q);
  PsiFunction psi = generate_psi("constant:1/2", Q);
  for (auto _ : state) benchmark::DoNotOptimize(second_moment(Q, psi, sieve).sum_overlaps);
}
BENCHMARK(BM_SecondMomentSweep)->Arg(100)->Arg(400);

void BM_CountSolutions(benchmark::State& state) {
  const uint32_t Q = 2000;
  Sieve sieve(Q);
  PsiFunction psi = generate_psi("constant:1/2", Q);
  Rat alpha = make_rat(Int("12297829382473034410"), Int(1) << 64);
  for (auto _ : state) benchmark::DoNotOptimize(count_solutions(Q, alpha, psi, sieve));
}
BENCHMARK(BM_CountSolutions);

}  // namespace
