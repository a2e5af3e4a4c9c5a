#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace redfrac {

using Int = mpz_class;
using Rat = mpq_class;

// num/den with den > 0, fully reduced. Throws on zero denominator.
inline Rat make_rat(Int num, Int den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(std::move(num), std::move(den));
  r.canonicalize();
  return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

// Accepts "a/b" or a bare integer "a".
Rat parse_rat(const std::string& text);

// Always emits the slashed form, e.g. "3/1", "-5/7".
std::string rat_str(const Rat& v);

// x^e for e >= 0 (0^0 = 1).
Rat rat_pow(const Rat& x, unsigned long e);

Int floor_rat(const Rat& v);
Int ceil_rat(const Rat& v);

// Decimal rendering of v truncated toward -inf (round_up=false) or +inf,
// with exactly `digits` fractional digits. Used for deterministic reports.
std::string rat_decimal(const Rat& v, int digits, bool round_up);

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b != 0) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace redfrac
