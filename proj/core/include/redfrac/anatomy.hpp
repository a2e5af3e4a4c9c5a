#pragma once

#include <cstdint>
#include <vector>

#include "redfrac/certified.hpp"
#include "redfrac/rational.hpp"

namespace redfrac {

struct PrimeSet {
  std::vector<uint64_t> primes;  // ascending, all prime
  bool odd_only = false;

  PrimeSet(std::vector<uint64_t> primes_, bool odd_only_);
};

// f(n) = prod_{p | n, p in P} (1 + 1/(p-2)); requires an odd-only set.
Rat f_multiplicative(uint64_t n, const PrimeSet& P);

// Moebius transform g of f: multiplicative with g(p) = 1/(p-2) for p in P,
// zero at higher prime powers and at primes outside P.
Rat moebius_transform_g(uint64_t n, const PrimeSet& P);

struct MeanValueReport {
  Rat sum;        // sum_{n<=x} f(n), exact
  Rat main_term;  // x prod_{p in P} (1 + 1/(p(p-2))), exact
  Rat residual;   // sum - main_term
};

MeanValueReport mean_value_check(uint64_t x, const PrimeSet& P);

// R_t(n) = sum of 1/p over distinct primes p | n with p >= t.
Rat reciprocal_prime_sum(uint64_t n, const Rat& t);

struct AnatomyReport {
  uint64_t count;                 // #{n <= x : R_t(n) >= c}
  certified::Enclosure majorant;  // e^{-100ct} sum_{n<=x} prod_{p|n, p>=t} e^{100t/p}
};

// Counts by enumeration and certifies the Markov majorant; the constant-free
// inequality count <= majorant is checked against the certified lower bound
// (escalating precision) and a violation throws.
AnatomyReport anatomy_count(uint64_t x, const Rat& t, const Rat& c);

}  // namespace redfrac
