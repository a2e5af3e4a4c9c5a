#include <doctest.h>

#include "redfrac/bounds.hpp"

using namespace redfrac;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("pv_factor") {
  PsiFunction half = generate_psi("constant:1/2", 10);
  // (1/2)(2/3) (1+1/2)(1+1/3) = 2/3, both primes of 6 exceed D = 3/2
  CHECK(pv_factor(2, 3, half) == make_rat(2, 3));
  CHECK(pv_factor(3, 2, half) == make_rat(2, 3));
  CHECK_THROWS_AS(pv_factor(4, 4, half), std::invalid_argument);

  // coprime pair with D at least every prime divisor: bare product of measures
  PsiFunction big = generate_psi("constant:1/2", 100);
  // q=35, r=99: qr/gcd^2 primes {3,5,7,11}, D = 99/2 > 11
  CHECK(big_d(35, 99, big) == make_rat(99, 2));
  Rat lam35 = approx_set(35, big).measure();
  Rat lam99 = approx_set(99, big).measure();
  CHECK(pv_factor(35, 99, big) == lam35 * lam99);
}

TEST_CASE("km_bound_parts") {
  PsiFunction half = generate_psi("constant:1/2", 10);

  BoundReport r5 = km_bound_parts(2, 3, half, Rat(2), Rat(5));
  CHECK(r5.euler_factor == 1);  // no prime divisor of 6 exceeds 5
  CHECK(r5.exact_overlap == make_rat(1, 2));
  CHECK(r5.product_term == make_rat(1, 3));
  REQUIRE(r5.ratio.has_value());
  CHECK(r5.ratio->lo == make_rat(3, 2));

  BoundReport r2 = km_bound_parts(2, 3, half, Rat(2), Rat(2));
  CHECK(r2.euler_factor == make_rat(3, 2));  // single prime 3: 1 + 1/(3-1)

  // error term at u=4, T=2, D=3/2: 1/16 + 16 log(3.5) log(2) / (3/2) ~ 9.3253
  BoundReport r4 = km_bound_parts(2, 3, half, Rat(4), Rat(2));
  REQUIRE(r4.error_term.has_value());
  CHECK(r4.error_term->lo > make_rat(93, 10));
  CHECK(r4.error_term->hi < make_rat(94, 10));

  // symmetric pair gives the identical report
  BoundReport fwd = km_bound_parts(2, 3, half, Rat(4), Rat(2));
  BoundReport rev = km_bound_parts(3, 2, half, Rat(4), Rat(2));
  CHECK(fwd.exact_overlap == rev.exact_overlap);
  CHECK(fwd.product_term == rev.product_term);
  CHECK(fwd.euler_factor == rev.euler_factor);
  CHECK(fwd.error_term->lo == rev.error_term->lo);
  CHECK(fwd.d_value == rev.d_value);

  CHECK_THROWS_AS(km_bound_parts(2, 3, half, make_rat(1, 2), Rat(4)), std::invalid_argument);
  CHECK_THROWS_AS(km_bound_parts(2, 3, half, Rat(2), Rat(1)), std::invalid_argument);
}

TEST_CASE("km_bound_specialized") {
  PsiFunction half = generate_psi("constant:1/2", 10);
  // A = F_1(3/2) ~ 3.19: only the prime 3 is excluded... 3 < 3.19, so both 2,3 below A
  BoundReport rep = km_bound_specialized(2, 3, half, Rat(1));
  CHECK(rep.euler_factor == 1);
  REQUIRE(rep.error_term.has_value());
  // (log(3.5))^{-1} ~ 0.7982
  CHECK(rep.error_term->lo > make_rat(79, 100));
  CHECK(rep.error_term->hi < make_rat(80, 100));

  // D < 1/2 pairs have empty overlap (trivially bounded)
  PsiFunction rl = generate_psi("reciprocal-log", 40);
  for (uint32_t q = 20; q <= 40; ++q)
    for (uint32_t r = q + 1; r <= 40; ++r)
      if (big_d(q, r, rl) < make_rat(1, 2)) {
        BoundReport b = km_bound_specialized(q, r, rl, Rat(1));
        REQUIRE(b.exact_overlap == 0);
      }

  // a pair with a prime beyond A: q=2, r=11 has D=11/2, F_1(11/2) ~ 3.2, prime 11 > A
  PsiFunction half11 = generate_psi("constant:1/2", 11);
  BoundReport tail = km_bound_specialized(2, 11, half11, Rat(1));
  CHECK(tail.euler_factor == Rat(1) + make_rat(1, 10));

  // swapping the pair gives the identical report
  BoundReport swapped = km_bound_specialized(11, 2, half11, Rat(1));
  CHECK(swapped.euler_factor == tail.euler_factor);
  CHECK(swapped.exact_overlap == tail.exact_overlap);
  CHECK(swapped.product_term == tail.product_term);
  CHECK(swapped.d_value == tail.d_value);
  CHECK(swapped.error_term->lo == tail.error_term->lo);

  CHECK_THROWS_AS(km_bound_specialized(5, 5, half, Rat(1)), std::invalid_argument);
}

TEST_CASE("ratio is nonnegative, and at most 1 when the bound tightens") {
  // ratio >= 0 on a small scan
  PsiFunction half = generate_psi("constant:1/2", 24);
  for (uint32_t q = 1; q <= 24; ++q)
    for (uint32_t r = q + 1; r <= 24; ++r) {
      BoundReport rep = km_bound_parts(q, r, half, Rat(2), Rat(4));
      REQUIRE(rep.ratio.has_value());
      REQUIRE(rep.ratio->lo >= 0);
    }

  // Pairs along the power-of-two tower have euler_factor = 1 at T = 2 and,
  // once D is large, an error term under the calibrated slack 1/10 at u = 5;
  // there the overlap never exceeds the bare product bound.
  PsiFunction tower = generate_psi("constant:1/2", 1 << 15);
  const Rat slack = make_rat(1, 10);
  for (auto [q, r] : {std::pair<uint32_t, uint32_t>{1, 1 << 14},
                      std::pair<uint32_t, uint32_t>{2, 1 << 15}}) {
    BoundReport rep = km_bound_parts(q, r, tower, Rat(5), Rat(2));
    REQUIRE(rep.euler_factor == 1);
    REQUIRE(rep.error_term.has_value());
    REQUIRE(rep.error_term->hi <= slack);
    REQUIRE(rep.ratio->hi <= 1);
  }
}

TEST_CASE("zero-psi pairs stay consistent") {
  PsiFunction prime = generate_psi("prime-support:1/2", 20);
  // q=4 and r=9 both carry psi=0: all terms vanish
  BoundReport rep = km_bound_parts(4, 9, prime, Rat(2), Rat(4));
  CHECK(rep.exact_overlap == 0);
  CHECK(rep.product_term == 0);
  CHECK(rep.d_value == 0);
  CHECK(!rep.error_term.has_value());  // error shape divides by D
  REQUIRE(rep.ratio.has_value());
  CHECK(rep.ratio->lo == 0);
  CHECK(rep.ratio->hi == 0);
}

TEST_SUITE_END();
