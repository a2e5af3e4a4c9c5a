#include "redfrac/anatomy.hpp"

#include <map>
#include <stdexcept>

#include "redfrac/arith.hpp"
#include "redfrac/errors.hpp"

namespace redfrac {

PrimeSet::PrimeSet(std::vector<uint64_t> primes_, bool odd_only_)
    : primes(std::move(primes_)), odd_only(odd_only_) {
  uint64_t prev = 0;
  for (uint64_t p : primes) {
    if (p <= prev) throw std::invalid_argument("PrimeSet: entries must be strictly ascending");
    Factorization f = factorize_trial(p);
    if (f.size() != 1 || f[0].exponent != 1)
      throw std::invalid_argument("PrimeSet: " + std::to_string(p) + " is not prime");
    if (odd_only && p == 2) throw std::invalid_argument("PrimeSet: 2 not allowed in odd-only set");
    prev = p;
  }
}

Rat f_multiplicative(uint64_t n, const PrimeSet& P) {
  if (n < 1) throw std::invalid_argument("f_multiplicative: n must be >= 1");
  for (uint64_t p : P.primes)
    if (p == 2) throw std::invalid_argument("f_multiplicative: P must contain odd primes only");
  Rat out(1);
  for (uint64_t p : P.primes)
    if (n % p == 0)
      out *= make_rat(Int(static_cast<unsigned long>(p - 1)), Int(static_cast<unsigned long>(p - 2)));
  return out;
}

Rat moebius_transform_g(uint64_t n, const PrimeSet& P) {
  if (n < 1) throw std::invalid_argument("moebius_transform_g: n must be >= 1");
  Rat out(1);
  for (const auto& [p, e] : factorize_trial(n)) {
    if (e >= 2) return Rat(0);
    bool in_set = false;
    for (uint64_t q : P.primes)
      if (q == p) in_set = true;
    if (!in_set) return Rat(0);
    out *= make_rat(Int(1), Int(static_cast<unsigned long>(p - 2)));
  }
  return out;
}

MeanValueReport mean_value_check(uint64_t x, const PrimeSet& P) {
  if (x < 2) throw std::invalid_argument("mean_value_check: x must be >= 2");
  // sum_{n<=x} f(n) = sum_{d | squarefree P-products} g(d) floor(x/d)
  size_t k = P.primes.size();
  if (k > 20) throw std::invalid_argument("mean_value_check: prime set too large");
  Rat sum(0);
  for (size_t mask = 0; mask < (size_t{1} << k); ++mask) {
    uint64_t d = 1;
    Rat g(1);
    for (size_t i = 0; i < k; ++i)
      if (mask & (size_t{1} << i)) {
        d *= P.primes[i];
        g *= make_rat(Int(1), Int(static_cast<unsigned long>(P.primes[i] - 2)));
      }
    if (d > x) continue;
    sum += g * Rat(Int(static_cast<unsigned long>(x / d)));
  }
  Rat main(Int(static_cast<unsigned long>(x)));
  for (uint64_t p : P.primes)
    main *= Rat(1) + make_rat(Int(1), Int(static_cast<unsigned long>(p * (p - 2))));
  return MeanValueReport{sum, main, sum - main};
}

Rat reciprocal_prime_sum(uint64_t n, const Rat& t) {
  if (n < 1) throw std::invalid_argument("reciprocal_prime_sum: n must be >= 1");
  Rat out(0);
  for (const auto& [p, e] : factorize_trial(n))
    if (Rat(Int(static_cast<unsigned long>(p))) >= t)
      out += make_rat(Int(1), Int(static_cast<unsigned long>(p)));
  return out;
}

AnatomyReport anatomy_count(uint64_t x, const Rat& t, const Rat& c) {
  if (t < 1) throw std::invalid_argument("anatomy_count: t must be >= 1");
  if (c <= 0 || c > 1) throw std::invalid_argument("anatomy_count: c must be in (0,1]");

  // One factorization sweep; group equal exponent sums so the certified
  // phase evaluates each distinct exponential once.
  Sieve sieve(x < 2 ? 2 : static_cast<uint32_t>(x));
  uint64_t count = 0;
  std::map<Rat, uint64_t> by_value;  // R_t(n) -> multiplicity
  for (uint64_t n = 1; n <= x; ++n) {
    Rat rt(0);
    for (const auto& [p, e] : sieve.factorize(n))
      if (Rat(Int(static_cast<unsigned long>(p))) >= t)
        rt += make_rat(Int(1), Int(static_cast<unsigned long>(p)));
    if (rt >= c) ++count;
    ++by_value[rt];
  }

  certified::EncFn majorant_fn = [&by_value, t, c](int prec) {
    using namespace certified;
    Enclosure sum = enc_point(Rat(0));
    for (const auto& [rt, mult] : by_value) {
      Enclosure term = enc_exp(enc_point(Rat(100) * t * rt), prec);
      sum = sum + term * Rat(Int(static_cast<unsigned long>(mult)));
    }
    Enclosure prefactor = enc_exp(enc_point(Rat(-100) * c * t), prec);
    return prefactor * sum;
  };

  AnatomyReport rep;
  rep.count = count;
  rep.majorant = certified::refine_relative(majorant_fn, 20);
  if (certified::compare(majorant_fn, Rat(Int(static_cast<unsigned long>(count)))) < 0)
    throw TheoremViolation("anatomy_count: count exceeds the Markov majorant at x=" +
                           std::to_string(x));
  return rep;
}

}  // namespace redfrac
