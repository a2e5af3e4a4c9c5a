#include <doctest.h>

#include "redfrac/arith.hpp"
#include "redfrac/psi.hpp"

using namespace redfrac;

TEST_SUITE_BEGIN("arith");

TEST_CASE("factorize basics") {
  Sieve sieve(100);
  CHECK(sieve.factorize(12) == Factorization{{2, 2}, {3, 1}});
  CHECK(sieve.factorize(1) == Factorization{});
  CHECK(sieve.factorize(97) == Factorization{{97, 1}});
  CHECK_THROWS_AS(sieve.factorize(101), std::out_of_range);
  CHECK(factorize_trial(12) == Factorization{{2, 2}, {3, 1}});
  CHECK(factorize_trial(1) == Factorization{});
  CHECK(factorize_trial(97) == Factorization{{97, 1}});
  CHECK(factorize_trial(2 * 3 * 5 * 7 * 11 * 13) ==
        Factorization{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}, {13, 1}});
}

TEST_CASE("factorize and totient agree with definitions up to 1e5") {
  const uint32_t N = 100000;
  Sieve sieve(N);
  auto phi = totient_table(N);
  CHECK(phi[1] == 1);
  CHECK(phi[2] == 1);
  CHECK(phi[3] == 2);
  CHECK(phi[12] == 4);
  CHECK(phi[97] == 96);
  for (uint32_t n = 1; n <= N; ++n) {
    Factorization f = sieve.factorize(n);
    CHECK(factorization_value(f) == n);
    // phi(n) = n prod (1 - 1/p), recomputed from the factorization
    CHECK(totient_of(f, n) == phi[n]);
  }
}

TEST_CASE("big_d") {
  PsiFunction half = generate_psi("constant:1/2", 10);
  CHECK(big_d(2, 3, half) == make_rat(3, 2));
  CHECK(big_d(6, 4, half) == make_rat(3, 2));  // max(4/2, 6/2)/2
  CHECK(big_d(3, 2, half) == big_d(2, 3, half));

  std::vector<Rat> vals(11, Rat(0));
  PsiFunction zero4(10, vals);
  CHECK(big_d(4, 4, zero4) == 0);

  CHECK_THROWS_AS(big_d(11, 2, half), std::out_of_range);
}

TEST_CASE("big_d symmetry over a grid") {
  PsiFunction psi = generate_psi("reciprocal-log", 40);
  for (uint32_t q = 1; q <= 40; ++q)
    for (uint32_t r = q; r <= 40; ++r) CHECK(big_d(q, r, psi) == big_d(r, q, psi));
}

TEST_CASE("l_sum") {
  CHECK(l_sum(Rat(1), 6, 4) == make_rat(5, 6));  // qr/gcd^2 = 6: 1/2 + 1/3
  CHECK(l_sum(Rat(3), 6, 4) == make_rat(1, 3));
  CHECK(l_sum(Rat(1), 9, 9) == 0);
  CHECK(l_sum(Rat(2), 7, 7) == 0);

  // non-increasing in s, and the prime 2 leaves at s > 2
  for (uint64_t q : {4u, 6u, 30u}) {
    for (uint64_t r : {9u, 10u, 77u}) {
      Rat prev = l_sum(Rat(1), q, r);
      for (int s = 2; s <= 12; ++s) {
        Rat cur = l_sum(Rat(s), q, r);
        CHECK(cur <= prev);
        prev = cur;
      }
      // no prime lies in [1,2), and 2 is the only one in [2,3)
      uint64_t ratio = q / gcd_u64(q, r) * (r / gcd_u64(q, r));
      Rat even_term = ratio % 2 == 0 ? make_rat(1, 2) : Rat(0);
      CHECK(l_sum(Rat(1), q, r) == l_sum(Rat(2), q, r));
      CHECK(l_sum(Rat(1), q, r) == l_sum(Rat(3), q, r) + even_term);
    }
  }
}

TEST_CASE("lmn_split") {
  CHECK(lmn_split(12, 18) == LmnSplit{1, 6, 36});
  CHECK(lmn_split(6, 6) == LmnSplit{6, 1, 1});
  CHECK(lmn_split(4, 9) == LmnSplit{1, 1, 36});

  // identities over the full grid q,r <= 1000:
  //   l m = gcd, l n = lcm, l^2 m n = q r, rad(n) = rad(qr/gcd^2)
  for (uint64_t q = 1; q <= 1000; ++q) {
    for (uint64_t r = 1; r <= 1000; ++r) {
      LmnSplit s = lmn_split(q, r);
      uint64_t g = gcd_u64(q, r);
      REQUIRE(s.l * s.m == g);
      REQUIRE(s.l * s.n == q / g * r);
      REQUIRE(s.l * s.l * s.m * s.n == q * r);
      uint64_t rad_n = 1, rad_ratio = 1;
      for (const auto& [p, e] : factorize_trial(s.n)) rad_n *= p;
      for (uint64_t p : ratio_primes(q, r)) rad_ratio *= p;
      REQUIRE(rad_n == rad_ratio);
    }
  }
}

TEST_CASE("smooth_part") {
  CHECK(smooth_part(36, Rat(2)) == 4);
  CHECK(smooth_part(36, Rat(3)) == 36);
  CHECK(smooth_part(1, Rat(2)) == 1);
  CHECK(smooth_part(1, Rat(1000)) == 1);
  CHECK(smooth_part(35, make_rat(13, 2)) == 5);  // rational threshold between 5 and 7
}

TEST_CASE("f_threshold certificate") {
  FThreshold f0 = f_threshold(Rat(1), Rat(0));
  // hand-derived: F_1(0) = exp(log(100) logloglog(100) / (8 loglog(100)) + 1) ~ 3.1887
  CHECK(f0.cert.lo > make_rat(3188, 1000));
  CHECK(f0.cert.hi < make_rat(3190, 1000));
  CHECK(f0.cert.width() <= f0.cert.lo / rat_pow(Rat(2), 40));
  CHECK(f0.approx == doctest::Approx(3.1887).epsilon(1e-3));

  // x = floor(e^100) - 100 puts log(x+100) within 4e-44 of 100: F ~ 171.68
  Rat x = Rat(Int("26881171418161354484126255515800135873611118")) - 100;
  FThreshold fe = f_threshold(Rat(1), x);
  CHECK(fe.cert.lo > Rat(171));
  CHECK(fe.cert.hi < Rat(172));
  CHECK(fe.approx == doctest::Approx(171.68).epsilon(1e-2));

  // monotone: F_1(10^6) > F_1(10^3)
  CHECK(f_threshold(Rat(1), Rat(1000000)).cert.lo > f_threshold(Rat(1), Rat(1000)).cert.hi);

  CHECK_THROWS_AS(f_threshold(make_rat(1, 2), Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(f_threshold(Rat(1), Rat(-1)), std::invalid_argument);
}

TEST_SUITE_END();
