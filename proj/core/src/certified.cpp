#include "redfrac/certified.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace redfrac {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rat: empty string");
  Rat r;
  if (r.set_str(text, 10) != 0)
    throw std::invalid_argument("parse_rat: malformed rational '" + text + "'");
  if (r.get_den() == 0)
    throw std::invalid_argument("parse_rat: zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& v) {
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Rat rat_pow(const Rat& x, unsigned long e) {
  Rat r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), x.get_num_mpz_t(), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), x.get_den_mpz_t(), e);
  return r;
}

Int floor_rat(const Rat& v) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

Int ceil_rat(const Rat& v) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

std::string rat_decimal(const Rat& v, int digits, bool round_up) {
  Int scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rat scaled = v * Rat(scale);
  Int n = round_up ? ceil_rat(scaled) : floor_rat(scaled);
  bool neg = n < 0;
  Int a = abs(n);
  std::string s = a.get_str();
  if (static_cast<int>(s.size()) <= digits)
    s.insert(0, static_cast<size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<size_t>(digits), ".");
  return (neg ? "-" : "") + s;
}

}  // namespace redfrac

namespace redfrac::certified {

namespace {

Rat mpfr_to_rat(const mpfr_t x) {
  if (!mpfr_number_p(x)) throw std::runtime_error("mpfr_to_rat: non-finite");
  if (mpfr_zero_p(x)) return Rat(0);
  Int mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
  Rat r(mant);
  if (e >= 0) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    r *= Rat(p);
  } else {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    r /= Rat(p);
  }
  return r;
}

struct MpfrVar {
  mpfr_t x;
  explicit MpfrVar(int prec) { mpfr_init2(x, prec); }
  ~MpfrVar() { mpfr_clear(x); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
};

// f monotone increasing: apply with downward rounding at lo, upward at hi.
template <typename F>
Enclosure monotone_increasing(const Enclosure& in, int prec, F&& f) {
  MpfrVar t(prec), r(prec);
  mpfr_set_q(t.x, in.lo.get_mpq_t(), MPFR_RNDD);
  f(r.x, t.x, MPFR_RNDD);
  Rat lo = mpfr_to_rat(r.x);
  mpfr_set_q(t.x, in.hi.get_mpq_t(), MPFR_RNDU);
  f(r.x, t.x, MPFR_RNDU);
  Rat hi = mpfr_to_rat(r.x);
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace

Enclosure::Enclosure(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo > hi) throw std::invalid_argument("Enclosure: lo > hi");
}

std::string Enclosure::str(int digits) const {
  return "[" + rat_decimal(lo, digits, false) + ", " + rat_decimal(hi, digits, true) + "]";
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  return Enclosure(a.lo + b.lo, a.hi + b.hi);
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  return Enclosure(a.lo - b.hi, a.hi - b.lo);
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  std::array<Rat, 4> c = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return Enclosure(*std::min_element(c.begin(), c.end()),
                   *std::max_element(c.begin(), c.end()));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.lo <= 0 && b.hi >= 0)
    throw std::domain_error("Enclosure division by interval containing zero");
  std::array<Rat, 4> c = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  return Enclosure(*std::min_element(c.begin(), c.end()),
                   *std::max_element(c.begin(), c.end()));
}

Enclosure operator+(const Enclosure& a, const Rat& b) {
  return Enclosure(a.lo + b, a.hi + b);
}

Enclosure operator*(const Enclosure& a, const Rat& b) {
  if (b >= 0) return Enclosure(a.lo * b, a.hi * b);
  return Enclosure(a.hi * b, a.lo * b);
}

Enclosure enc_ipow(const Enclosure& x, long e) {
  if (e == 0) return enc_point(Rat(1));
  if (e < 0) {
    if (x.lo <= 0) throw std::domain_error("enc_ipow: negative power needs positive interval");
    Rat lo = rat_pow(x.hi, static_cast<unsigned long>(-e));
    Rat hi = rat_pow(x.lo, static_cast<unsigned long>(-e));
    return Enclosure(1 / lo, 1 / hi);
  }
  unsigned long ue = static_cast<unsigned long>(e);
  if (x.lo >= 0) return Enclosure(rat_pow(x.lo, ue), rat_pow(x.hi, ue));
  if (x.hi <= 0) {
    Rat a = rat_pow(x.lo, ue), b = rat_pow(x.hi, ue);
    return e % 2 == 0 ? Enclosure(std::min(a, b), std::max(a, b)) : Enclosure(a, b);
  }
  // straddles zero
  Rat a = rat_pow(x.lo, ue), b = rat_pow(x.hi, ue);
  if (e % 2 == 0) return Enclosure(Rat(0), std::max(a, b));
  return Enclosure(a, b);
}

Enclosure enc_exp(const Enclosure& x, int prec) {
  return monotone_increasing(x, prec, [](mpfr_t r, const mpfr_t t, mpfr_rnd_t rnd) {
    mpfr_exp(r, t, rnd);
  });
}

Enclosure enc_log(const Enclosure& x, int prec) {
  if (x.lo <= 0) throw std::domain_error("enc_log: requires positive interval");
  return monotone_increasing(x, prec, [](mpfr_t r, const mpfr_t t, mpfr_rnd_t rnd) {
    mpfr_log(r, t, rnd);
  });
}

Enclosure enc_pow(const Enclosure& base, const Rat& e, int prec) {
  if (base.lo <= 0) throw std::domain_error("enc_pow: requires positive base");
  if (e == 0) return enc_point(Rat(1));
  if (e.get_den() == 1 && e.get_num().fits_slong_p())
    return enc_ipow(base, e.get_num().get_si());
  return enc_exp(enc_log(base, prec) * e, prec);
}

namespace {

int compare_once(const Enclosure& A, const Enclosure& B) {
  if (A.hi < B.lo) return -1;
  if (A.lo > B.hi) return 1;
  if (A.is_point() && B.is_point()) return 0;  // equal exact points
  return 2;  // undecided
}

}  // namespace

int compare(const EncFn& a, const EncFn& b, int start_prec, int max_prec) {
  for (int prec = start_prec; prec <= max_prec; prec *= 2) {
    int c = compare_once(a(prec), b(prec));
    if (c != 2) return c;
  }
  throw std::runtime_error("certified::compare undecided at maximum precision");
}

int compare(const EncFn& a, const Rat& b, int start_prec, int max_prec) {
  return compare(a, enc_const(b), start_prec, max_prec);
}

Enclosure refine_relative(const EncFn& fn, int rel_bits, int start_prec, int max_prec) {
  Rat tol = Rat(1) / rat_pow(Rat(2), static_cast<unsigned long>(rel_bits));
  for (int prec = start_prec; prec <= max_prec; prec *= 2) {
    Enclosure e = fn(prec);
    if (e.is_point()) return e;
    if (e.lo > 0 && e.width() <= e.lo * tol) return e;
    if (e.hi < 0 && e.width() <= -e.hi * tol) return e;
  }
  throw std::runtime_error("certified::refine_relative: target width unreachable");
}

}  // namespace redfrac::certified
