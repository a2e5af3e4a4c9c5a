#include "redfrac/arith.hpp"

#include <stdexcept>

#include "redfrac/psi.hpp"

namespace redfrac {

uint64_t factorization_value(const Factorization& f) {
  uint64_t v = 1;
  for (const auto& [p, e] : f)
    for (uint32_t i = 0; i < e; ++i) v *= p;
  return v;
}

uint64_t totient_of(const Factorization& f, uint64_t n) {
  uint64_t t = n;
  for (const auto& [p, e] : f) t = t / p * (p - 1);
  return t;
}

Sieve::Sieve(uint32_t limit) : limit_(limit), spf_(static_cast<size_t>(limit) + 1, 0) {
  if (limit < 1) throw std::invalid_argument("Sieve: limit must be >= 1");
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (uint64_t j = i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<uint32_t>(i);
  }
}

bool Sieve::is_prime(uint32_t n) const { return n >= 2 && spf_.at(n) == n; }

uint32_t Sieve::smallest_factor(uint32_t n) const {
  if (n < 2 || n > limit_) throw std::out_of_range("Sieve::smallest_factor");
  return spf_[n];
}

Factorization Sieve::factorize(uint64_t n) const {
  if (n < 1 || n > limit_) throw std::out_of_range("Sieve::factorize: n outside sieve");
  Factorization f;
  auto m = static_cast<uint32_t>(n);
  while (m > 1) {
    uint32_t p = spf_[m];
    uint32_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  return f;
}

Factorization factorize_trial(uint64_t n) {
  if (n < 1) throw std::invalid_argument("factorize_trial: n must be >= 1");
  Factorization f;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

std::vector<uint64_t> totient_table(uint32_t Q) {
  std::vector<uint64_t> phi(static_cast<size_t>(Q) + 1);
  for (uint64_t i = 0; i <= Q; ++i) phi[i] = i;
  for (uint64_t p = 2; p <= Q; ++p) {
    if (phi[p] != p) continue;  // p composite already reduced
    for (uint64_t j = p; j <= Q; j += p) phi[j] -= phi[j] / p;
  }
  return phi;
}

Rat big_d(uint64_t q, uint64_t r, const PsiFunction& psi) {
  Rat a = psi.at(static_cast<uint32_t>(q)) * Rat(Int(r));
  Rat b = psi.at(static_cast<uint32_t>(r)) * Rat(Int(q));
  Rat m = a > b ? a : b;
  return m / Rat(Int(gcd_u64(q, r)));
}

std::vector<uint64_t> ratio_primes(uint64_t q, uint64_t r) {
  return ratio_primes(factorize_trial(q), factorize_trial(r));
}

std::vector<uint64_t> ratio_primes(const Factorization& fq, const Factorization& fr) {
  std::vector<uint64_t> out;
  size_t i = 0, j = 0;
  while (i < fq.size() || j < fr.size()) {
    if (j == fr.size() || (i < fq.size() && fq[i].prime < fr[j].prime)) {
      out.push_back(fq[i++].prime);
    } else if (i == fq.size() || fr[j].prime < fq[i].prime) {
      out.push_back(fr[j++].prime);
    } else {
      if (fq[i].exponent != fr[j].exponent) out.push_back(fq[i].prime);
      ++i;
      ++j;
    }
  }
  return out;
}

Rat l_sum(const Rat& s, uint64_t q, uint64_t r) {
  Rat total(0);
  for (uint64_t p : ratio_primes(q, r))
    if (Rat(Int(p)) >= s) total += make_rat(Int(1), Int(p));
  return total;
}

LmnSplit lmn_split(uint64_t q, uint64_t r) {
  Factorization fq = factorize_trial(q), fr = factorize_trial(r);
  auto pw = [](uint64_t p, uint32_t e) {
    uint64_t v = 1;
    while (e--) v *= p;
    return v;
  };
  LmnSplit s{1, 1, 1};
  size_t i = 0, j = 0;
  while (i < fq.size() || j < fr.size()) {
    uint64_t p;
    uint32_t u = 0, v = 0;
    if (j == fr.size() || (i < fq.size() && fq[i].prime < fr[j].prime)) {
      p = fq[i].prime;
      u = fq[i].exponent;
      ++i;
    } else if (i == fq.size() || fr[j].prime < fq[i].prime) {
      p = fr[j].prime;
      v = fr[j].exponent;
      ++j;
    } else {
      p = fq[i].prime;
      u = fq[i].exponent;
      v = fr[j].exponent;
      ++i;
      ++j;
    }
    if (u == v)
      s.l *= pw(p, u);
    else {
      s.m *= pw(p, std::min(u, v));
      s.n *= pw(p, std::max(u, v));
    }
  }
  return s;
}

uint64_t smooth_part(uint64_t n, const Rat& T) {
  if (T < 2) throw std::invalid_argument("smooth_part: T must be >= 2");
  uint64_t out = 1;
  for (const auto& [p, e] : factorize_trial(n))
    if (Rat(Int(p)) <= T)
      for (uint32_t i = 0; i < e; ++i) out *= p;
  return out;
}

certified::Enclosure f_threshold_enclosure(const Rat& C, const Rat& x, int prec) {
  using namespace certified;
  if (C < 1) throw std::invalid_argument("f_threshold: C must be >= 1");
  if (x < 0) throw std::invalid_argument("f_threshold: x must be >= 0");
  Enclosure l1 = enc_log(enc_point(x + 100), prec);   // log(x+100) >= log(100) > 0
  Enclosure l2 = enc_log(l1, prec);                   // loglog(x+100) > 1
  Enclosure l3 = enc_log(l2, prec);                   // logloglog(x+100) > 0
  Enclosure expo = (l1 * l3) / (l2 * Rat(8) * C) + Rat(1);
  return enc_exp(expo, prec);
}

certified::EncFn f_threshold_fn(const Rat& C, const Rat& x) {
  return [C, x](int prec) { return f_threshold_enclosure(C, x, prec); };
}

FThreshold f_threshold(const Rat& C, const Rat& x) {
  certified::Enclosure cert = certified::refine_relative(f_threshold_fn(C, x), 40);
  return FThreshold{cert, cert.approx()};
}

}  // namespace redfrac
