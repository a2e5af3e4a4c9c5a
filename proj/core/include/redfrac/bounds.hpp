#pragma once

#include <cstdint>
#include <optional>

#include "redfrac/certified.hpp"
#include "redfrac/measure.hpp"

namespace redfrac {

struct BoundReport {
  uint64_t q = 0, r = 0;
  Rat d_value;                   // D(q,r)
  Rat exact_overlap;             // lambda(A_q cap A_r)
  Rat product_term;              // lambda(A_q) lambda(A_r)
  Rat euler_factor;              // prod over the bound's prime tail, >= 1
  // u^{-u/2} + T^u log(D+2) log T / D for the two-parameter bound,
  // (log(D+2))^{-C} for the specialized one. Absent when D = 0 makes the
  // two-parameter error term unbounded.
  std::optional<certified::Enclosure> error_term;
  // exact_overlap / (product_term * euler_factor); absent when the
  // denominator vanishes while the overlap does not (never for valid psi).
  std::optional<certified::Enclosure> ratio;
};

// Structural right side of the classical overlap bound:
// lambda(A_q) lambda(A_r) prod_{p | qr/gcd^2, p > D(q,r)} (1 + 1/p).
Rat pv_factor(uint64_t q, uint64_t r, const PsiFunction& psi);

// Refined bound with explicit error shape: Euler factor over p > T with
// (1 + 1/(p-1)) weights, error u^{-u/2} + T^u log(D+2) log T / D.
BoundReport km_bound_parts(uint64_t q, uint64_t r, const PsiFunction& psi,
                           const Rat& u, const Rat& T);

// Same with T = F_C(D(q,r)) and error (log(D+2))^{-C}.
BoundReport km_bound_specialized(uint64_t q, uint64_t r, const PsiFunction& psi,
                                 const Rat& C);

}  // namespace redfrac
