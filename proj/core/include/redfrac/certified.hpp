#pragma once

#include <functional>
#include <optional>

#include "redfrac/rational.hpp"

namespace redfrac::certified {

// Interval [lo, hi] of exact rationals guaranteed to contain the real value
// under discussion. Field operations on enclosures are exact (the endpoints
// stay rational); only the transcendental primitives below consult MPFR with
// directed rounding.
struct Enclosure {
  Rat lo, hi;

  Enclosure() : lo(0), hi(0) {}
  Enclosure(Rat lo_, Rat hi_);

  bool is_point() const { return lo == hi; }
  Rat width() const { return hi - lo; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  double approx() const { return Rat((lo + hi) / 2).get_d(); }

  std::string str(int digits = 12) const;
};

inline Enclosure enc_point(Rat v) { return Enclosure(v, v); }

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
// Requires 0 outside [b.lo, b.hi].
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure operator+(const Enclosure& a, const Rat& b);
Enclosure operator*(const Enclosure& a, const Rat& b);

// x^e for integer e; requires x.lo > 0 when e < 0.
Enclosure enc_ipow(const Enclosure& x, long e);

// MPFR-backed primitives at the given working precision (bits).
Enclosure enc_exp(const Enclosure& x, int prec);
Enclosure enc_log(const Enclosure& x, int prec);  // requires x.lo > 0
// base^e = exp(e log base); requires base.lo > 0.
Enclosure enc_pow(const Enclosure& base, const Rat& e, int prec);

// A certified quantity: re-evaluable at any precision, each evaluation
// enclosing the same real number.
using EncFn = std::function<Enclosure(int prec)>;

inline EncFn enc_const(Rat v) {
  return [v = std::move(v)](int) { return enc_point(v); };
}

// Sign of a - b, escalating precision until the enclosures separate.
// Returns 0 only when both sides collapse to the same exact point.
// Throws std::runtime_error if still undecided at max_prec.
int compare(const EncFn& a, const EncFn& b, int start_prec = 96,
            int max_prec = 1 << 15);
int compare(const EncFn& a, const Rat& b, int start_prec = 96,
            int max_prec = 1 << 15);

inline bool certainly_ge(const EncFn& a, const Rat& b) { return compare(a, b) >= 0; }
inline bool certainly_le(const EncFn& a, const Rat& b) { return compare(a, b) <= 0; }

// Refine fn by doubling precision until relative width <= 2^-rel_bits.
// Requires the value to be nonzero (or an exact point).
Enclosure refine_relative(const EncFn& fn, int rel_bits, int start_prec = 96,
                          int max_prec = 1 << 15);

}  // namespace redfrac::certified
