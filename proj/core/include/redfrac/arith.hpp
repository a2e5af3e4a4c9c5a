#pragma once

#include <cstdint>
#include <vector>

#include "redfrac/certified.hpp"
#include "redfrac/rational.hpp"

namespace redfrac {

class PsiFunction;

struct FactorEntry {
  uint64_t prime;
  uint32_t exponent;
  bool operator==(const FactorEntry&) const = default;
};

// Sorted by prime, exponents >= 1; the empty sequence represents 1.
using Factorization = std::vector<FactorEntry>;

uint64_t factorization_value(const Factorization& f);
uint64_t totient_of(const Factorization& f, uint64_t n);

// Smallest-prime-factor sieve; backs all factorizations within a known bound.
class Sieve {
 public:
  explicit Sieve(uint32_t limit);

  uint32_t limit() const { return limit_; }
  bool is_prime(uint32_t n) const;
  uint32_t smallest_factor(uint32_t n) const;
  Factorization factorize(uint64_t n) const;  // requires 1 <= n <= limit

 private:
  uint32_t limit_;
  std::vector<uint32_t> spf_;
};

// Trial division; for quantities with no ambient sieve bound (graph labels).
Factorization factorize_trial(uint64_t n);

// phi(q) for q = 1..Q, index q (slot 0 unused).
std::vector<uint64_t> totient_table(uint32_t Q);

// max(r psi(q), q psi(r)) / gcd(q, r)
Rat big_d(uint64_t q, uint64_t r, const PsiFunction& psi);

// Distinct primes dividing qr/gcd(q,r)^2, i.e. primes with different
// multiplicity in q and r. Ascending.
std::vector<uint64_t> ratio_primes(uint64_t q, uint64_t r);
std::vector<uint64_t> ratio_primes(const Factorization& fq, const Factorization& fr);

// L_s(q,r) = sum of 1/p over p | qr/gcd^2 with p >= s.
Rat l_sum(const Rat& s, uint64_t q, uint64_t r);

struct LmnSplit {
  uint64_t l, m, n;
  bool operator==(const LmnSplit&) const = default;
};

// Per-prime decomposition of (q, r): l carries the primes with equal
// multiplicity, m the smaller and n the larger unequal multiplicities.
// Identities: l*m = gcd(q,r), l*n = lcm(q,r), l^2*m*n = q*r.
LmnSplit lmn_split(uint64_t q, uint64_t r);

// Largest divisor of n composed of primes <= T.
uint64_t smooth_part(uint64_t n, const Rat& T);

// F_C(x) = exp(log(x+100) logloglog(x+100) / (8C loglog(x+100)) + 1).
// Transcendental; always handled through certified enclosures.
certified::Enclosure f_threshold_enclosure(const Rat& C, const Rat& x, int prec);
certified::EncFn f_threshold_fn(const Rat& C, const Rat& x);

struct FThreshold {
  certified::Enclosure cert;  // relative width <= 2^-40
  double approx;
};
FThreshold f_threshold(const Rat& C, const Rat& x);

}  // namespace redfrac
