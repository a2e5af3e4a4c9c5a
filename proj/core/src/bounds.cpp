#include "redfrac/bounds.hpp"

#include <stdexcept>

namespace redfrac {

namespace {

using certified::EncFn;
using certified::Enclosure;

Rat lambda_measure(uint64_t q, const PsiFunction& psi) {
  auto fq = factorize_trial(q);
  return make_rat(Int(2 * totient_of(fq, q)), Int(static_cast<unsigned long>(q))) *
         psi.at(static_cast<uint32_t>(q));
}

void fill_common(BoundReport& rep, uint64_t q, uint64_t r, const PsiFunction& psi) {
  rep.q = q;
  rep.r = r;
  rep.d_value = big_d(q, r, psi);
  rep.exact_overlap = overlap_exact(static_cast<uint32_t>(q), static_cast<uint32_t>(r), psi);
  rep.product_term = lambda_measure(q, psi) * lambda_measure(r, psi);
}

void fill_ratio(BoundReport& rep) {
  Rat denom = rep.product_term * rep.euler_factor;
  if (denom == 0) {
    if (rep.exact_overlap == 0) rep.ratio = certified::enc_point(Rat(0));
    return;
  }
  rep.ratio = certified::enc_point(rep.exact_overlap / denom);
}

}  // namespace

Rat pv_factor(uint64_t q, uint64_t r, const PsiFunction& psi) {
  if (q == r) throw std::invalid_argument("pv_factor: requires q != r");
  Rat D = big_d(q, r, psi);
  Rat factor = lambda_measure(q, psi) * lambda_measure(r, psi);
  for (uint64_t p : ratio_primes(q, r))
    if (Rat(Int(static_cast<unsigned long>(p))) > D)
      factor *= make_rat(Int(static_cast<unsigned long>(p + 1)), Int(static_cast<unsigned long>(p)));
  return factor;
}

BoundReport km_bound_parts(uint64_t q, uint64_t r, const PsiFunction& psi,
                           const Rat& u, const Rat& T) {
  if (q == r) throw std::invalid_argument("km_bound_parts: requires q != r");
  if (u < 1) throw std::invalid_argument("km_bound_parts: u must be >= 1");
  if (T < 2) throw std::invalid_argument("km_bound_parts: T must be >= 2");
  BoundReport rep;
  fill_common(rep, q, r, psi);

  rep.euler_factor = Rat(1);
  for (uint64_t p : ratio_primes(q, r))
    if (Rat(Int(static_cast<unsigned long>(p))) > T)
      rep.euler_factor *= make_rat(Int(static_cast<unsigned long>(p)), Int(static_cast<unsigned long>(p - 1)));

  if (rep.d_value > 0) {
    Rat D = rep.d_value;
    EncFn err = [u, T, D](int prec) {
      using namespace certified;
      Enclosure first = enc_pow(enc_point(u), -u / 2, prec);
      Enclosure tail = enc_pow(enc_point(T), u, prec) *
                       enc_log(enc_point(D + 2), prec) *
                       enc_log(enc_point(T), prec) * (Rat(1) / D);
      return first + tail;
    };
    rep.error_term = certified::refine_relative(err, 30);
  }
  fill_ratio(rep);
  return rep;
}

BoundReport km_bound_specialized(uint64_t q, uint64_t r, const PsiFunction& psi,
                                 const Rat& C) {
  if (q == r) throw std::invalid_argument("km_bound_specialized: requires q != r");
  if (C < 1) throw std::invalid_argument("km_bound_specialized: C must be >= 1");
  BoundReport rep;
  fill_common(rep, q, r, psi);

  // prime tail cutoff at A = F_C(D); p vs A decided through the certificate
  EncFn threshold = f_threshold_fn(C, rep.d_value);
  rep.euler_factor = Rat(1);
  for (uint64_t p : ratio_primes(q, r))
    if (certified::compare(threshold, Rat(Int(static_cast<unsigned long>(p)))) < 0)
      rep.euler_factor *= make_rat(Int(static_cast<unsigned long>(p)), Int(static_cast<unsigned long>(p - 1)));

  Rat D = rep.d_value;
  EncFn err = [C, D](int prec) {
    using namespace certified;
    return enc_pow(enc_log(enc_point(D + 2), prec), -C, prec);
  };
  rep.error_term = certified::refine_relative(err, 30);
  fill_ratio(rep);
  return rep;
}

}  // namespace redfrac
