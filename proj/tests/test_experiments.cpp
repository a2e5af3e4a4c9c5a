#include <doctest.h>

#include "redfrac/experiments.hpp"

using namespace redfrac;

namespace {

PsiFunction zero_psi(uint32_t Q) {
  return PsiFunction(Q, std::vector<Rat>(Q + 1, Rat(0)));
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("count_solutions") {
  Sieve sieve(2000);
  PsiFunction half = generate_psi("constant:1/2", 2000);

  // Q=3, alpha=1/2: only q=2 counts; q=1 and q=3 miss strictly
  CHECK(count_solutions(3, make_rat(1, 2), half, sieve) == 1);

  CHECK(count_solutions(50, make_rat(1, 3), zero_psi(50), sieve) == 0);

  // exact hit at a reduced fraction
  CHECK(count_solutions(7, make_rat(3, 7), half, sieve) >= 1);
  PsiFunction tiny = generate_psi("constant:1/1000000", 50);
  CHECK(count_solutions(7, make_rat(3, 7), tiny, sieve) == 1);

  // non-decreasing in Q; bounded by the total number of reduced fractions
  Rat alpha = make_rat(577, 1024);
  uint64_t prev = 0, phisum = 0;
  auto phi = totient_table(60);
  for (uint32_t Q = 1; Q <= 60; ++Q) {
    uint64_t s = count_solutions(Q, alpha, half, sieve);
    CHECK(s >= prev);
    CHECK(s <= (phisum += phi[Q]));
    prev = s;
  }

  // brute-force oracle on a small grid: scan all reduced fractions
  for (uint32_t Q : {5u, 17u, 40u}) {
    for (const Rat& a : {make_rat(1, 7), make_rat(22, 64), make_rat(1023, 1024), Rat(0)}) {
      uint64_t direct = 0;
      for (uint32_t q = 1; q <= Q; ++q)
        for (uint32_t p = 1; p <= q; ++p) {
          if (gcd_u64(p, q) != 1) continue;
          Rat d = abs(a - make_rat(p, q));
          if (d > make_rat(1, 2)) d = 1 - d;
          if (d < half.at(q) / q) ++direct;
        }
      CHECK(count_solutions(Q, a, half, sieve) == direct);
    }
  }

  CHECK_THROWS_AS(count_solutions(10, Rat(1), half, sieve), std::invalid_argument);
  CHECK_THROWS_AS(count_solutions(5000, Rat(0), half, sieve), std::out_of_range);
}

TEST_CASE("second_moment sweep spot values") {
  Sieve sieve(100);
  PsiFunction half = generate_psi("constant:1/2", 100);

  MomentReport r1 = second_moment(1, half, sieve);
  CHECK(r1.psi_mass_value == 1);
  CHECK(r1.sum_overlaps == 1);

  MomentReport r2 = second_moment(2, half, sieve);
  CHECK(r2.psi_mass_value == make_rat(3, 2));
  CHECK(r2.sum_overlaps == make_rat(5, 2));
  CHECK(r2.ratio == make_rat(10, 9));

  MomentReport r3 = second_moment(3, half, sieve);
  CHECK(r3.sum_overlaps == make_rat(11, 2));

  MomentReport rz = second_moment(10, zero_psi(10), sieve);
  CHECK(rz.sum_overlaps == 0);
  CHECK(rz.psi_mass_value == 0);
}

TEST_CASE("sweep equals the pairwise double sum, Q <= 60") {
  const uint32_t Q = 60;
  Sieve sieve(Q);
  for (const char* spec : {"constant:1/2", "prime-support:1/2", "reciprocal-log"}) {
    PsiFunction psi = generate_psi(spec, Q);
    std::vector<TorusIntervalUnion> sets(Q + 1);
    for (uint32_t q = 1; q <= Q; ++q) sets[q] = approx_set(q, psi, sieve);
    Rat pairwise(0);
    for (uint32_t q = 1; q <= Q; ++q)
      for (uint32_t r = 1; r <= Q; ++r)
        pairwise += q == r ? sets[q].measure() : intersect(sets[q], sets[r]).measure();
    MomentReport rep = second_moment(Q, psi, sieve);
    REQUIRE(rep.sum_overlaps == pairwise);
    // Cauchy-Schwarz, exact
    REQUIRE(rep.sum_overlaps >= rep.psi_mass_value * rep.psi_mass_value);
  }
}

TEST_CASE("classify_pair small cases") {
  Sieve s3(3);
  PsiFunction h3 = generate_psi("constant:1/2", 3);
  CHECK(classify_pair(2, 2, 3, Rat(1), h3, s3).label == PairClassLabel::E1);
  CHECK(classify_pair(2, 3, 3, Rat(1), h3, s3).label == PairClassLabel::E2);

  // q=7, r=8 at Q=8: D = 4 above the cutoff ~3.14, prime tail {7} small: E4
  Sieve s8(8);
  PsiFunction h8 = generate_psi("constant:1/2", 8);
  PairClass e4 = classify_pair(7, 8, 8, Rat(1), h8, s8);
  CHECK(e4.label == PairClassLabel::E4);
  CHECK(e4.d_value == 4);

  // coprime pair whose ratio has no prime at or beyond F(D): the L-sum is
  // empty and the pair lands in E4
  Sieve s64(64);
  PsiFunction h64 = generate_psi("constant:1/2", 64);
  PairClass pow2 = classify_pair(1, 64, 64, Rat(1), h64, s64);
  CHECK(pow2.label == PairClassLabel::E4);
  CHECK(pow2.l_at_f_d == 0);
  CHECK(pow2.d_value == 32);

  // Psi < 2 rejected
  Sieve s2(2);
  CHECK_THROWS_AS(classify_pair(1, 2, 2, Rat(1), generate_psi("constant:1/2", 2), s2),
                  std::invalid_argument);
}

TEST_CASE("classify_pair reaches E5") {
  // q = 5*7*11*13, r = 17*19*23: D = r/2 far above the cutoff and the prime
  // tail beyond F(D) ~ 3.9 still carries mass ~0.666 > 1/log(Psi)
  const uint32_t Q = 7429;
  Sieve sieve(Q);
  PsiFunction half = generate_psi("constant:1/2", Q);
  PairClass pc = classify_pair(5005, 7429, Q, Rat(1), half, sieve);
  CHECK(pc.label == PairClassLabel::E5);
  CHECK(pc.d_value == make_rat(7429, 2));
}

TEST_CASE("classify_pair reaches E3") {
  // sparse psi keeps Psi(Q) ~ 8/3 while admitting a pair whose ratio
  // 15015 * 215441 is divisible by every prime in [3, 29]
  const uint32_t Q = 250000;
  const uint32_t q = 15015, r = 215441;
  std::vector<Rat> vals(Q + 1, Rat(0));
  for (uint32_t i = 1; i <= 4; ++i) vals[i] = make_rat(1, 2);
  vals[q] = make_rat(1, 10000000);
  vals[r] = make_rat(1, 10000000);
  PsiFunction psi(Q, std::move(vals));
  Sieve sieve(Q);
  PairClass pc = classify_pair(q, r, Q, Rat(100), psi, sieve);
  CHECK(pc.label == PairClassLabel::E3);
  CHECK(pc.l_at_f_psi > 1);
}

TEST_CASE("partition: subtotals sum to the double sum, diagonal equals Psi") {
  Sieve sieve(24);
  PsiFunction half = generate_psi("constant:1/2", 24);
  MomentReport rep = second_moment_with_classes(24, Rat(1), half, sieve);
  REQUIRE(rep.class_subtotals.has_value());
  Rat total(0);
  for (const Rat& s : *rep.class_subtotals) total += s;
  CHECK(total == rep.sum_overlaps);
  CHECK((*rep.class_subtotals)[0] == rep.psi_mass_value);
  // sweep agrees
  CHECK(second_moment(24, half, sieve).sum_overlaps == rep.sum_overlaps);
}

TEST_CASE("proposition_sum_1") {
  PsiFunction half = generate_psi("constant:1/2", 12);

  // t=1 with constant psi: D <= Psi for every pair, so the sum is (Psi/2)^2
  PropReport full = proposition_sum_1(12, Rat(1), half);
  Rat mass = psi_mass(12, half);
  CHECK(full.sum == mass * mass / 4);

  // Q=3, t=2: pairs with D <= 13/12 are (1,1),(1,2),(2,1),(2,2),(3,3)
  PsiFunction h3 = generate_psi("constant:1/2", 3);
  PropReport r32 = proposition_sum_1(3, Rat(2), h3);
  CHECK(r32.sum == make_rat(97, 144));

  PropReport zero = proposition_sum_1(10, Rat(2), zero_psi(10));
  CHECK(zero.sum == 0);
}

TEST_CASE("proposition_sum_2") {
  // hand-built nonempty case: only (105,143) and (143,105) satisfy both the
  // D-condition and L_{F(1)} >= F(1)^{-1/4} at C=100
  const uint32_t Q = 143;
  Sieve sieve(Q);
  PsiFunction half = generate_psi("constant:1/2", Q);
  PropReport rep = proposition_sum_2(Q, Rat(1), Rat(100), half, sieve);
  CHECK(rep.sum == make_rat(192, 1001));

  // small Q: the L-threshold ~0.75 is unreachable, sum empty
  Sieve s6(6);
  PropReport none = proposition_sum_2(6, Rat(2), Rat(1), generate_psi("constant:1/2", 6), s6);
  CHECK(none.sum == 0);

  PropReport zero = proposition_sum_2(10, Rat(1), Rat(1), zero_psi(10), Sieve(10));
  CHECK(zero.sum == 0);
}

TEST_CASE("subsequence_qk") {
  PsiFunction half = generate_psi("constant:1/2", 50);
  // C=9, k=1: threshold e; Psi(4) = 8/3 < e <= Psi(5) = 52/15
  CHECK(subsequence_qk(1, Rat(9), half) == 5);

  // monotone in k
  uint32_t prev = 1;
  for (uint32_t k = 1; k <= 6; ++k) {
    uint32_t qk = subsequence_qk(k, Rat(9), half);
    CHECK(qk >= prev);
    prev = qk;
  }

  // threshold beyond the table
  CHECK_THROWS_AS(subsequence_qk(100, Rat(9), half), std::invalid_argument);
  CHECK_THROWS_AS(subsequence_qk(1, Rat(4), half), std::invalid_argument);
}

TEST_CASE("monte_carlo_theorem1") {
  const uint32_t Q = 300;
  Sieve sieve(Q);
  PsiFunction half = generate_psi("constant:1/2", Q);

  MonteCarloReport empty = monte_carlo_theorem1(Q, half, sieve, 0, 7, 1);
  CHECK(empty.samples.empty());
  CHECK(empty.max_deviation == 0);

  MonteCarloReport a = monte_carlo_theorem1(Q, half, sieve, 16, 42, 1);
  MonteCarloReport b = monte_carlo_theorem1(Q, half, sieve, 16, 42, 3);
  REQUIRE(a.samples.size() == 16);
  for (size_t i = 0; i < 16; ++i) {
    CHECK(a.samples[i].bits == b.samples[i].bits);
    CHECK(a.samples[i].count == b.samples[i].count);
    CHECK(a.samples[i].deviation == b.samples[i].deviation);
  }
  CHECK(a.max_deviation == b.max_deviation);

  // deviations recompute from counts
  for (const auto& s : a.samples)
    CHECK(s.deviation == abs(Rat(Int(s.count)) / a.psi_mass_value - 1));

  CHECK_THROWS_AS(monte_carlo_theorem1(10, zero_psi(10), Sieve(10), 5, 1, 1),
                  std::invalid_argument);
}

TEST_SUITE_END();
