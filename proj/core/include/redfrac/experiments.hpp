#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "redfrac/bounds.hpp"
#include "redfrac/measure.hpp"

namespace redfrac {

// Number of coprime (p,q) with q <= Q and torus-distance(alpha, p/q) <
// psi(q)/q. Since psi <= 1/2, at most one candidate p per q: the nearest
// integers to alpha*q, no full scans.
uint64_t count_solutions(uint32_t Q, const Rat& alpha, const PsiFunction& psi,
                         const Sieve& sieve);

enum class PairClassLabel { E1, E2, E3, E4, E5 };

const char* to_string(PairClassLabel label);

struct PairClass {
  PairClassLabel label;
  Rat d_value;                         // D(q,r)
  Rat l_at_f_psi;                      // L_{F(Psi)}(q,r)   (classes 2/3)
  Rat l_at_f_d;                        // L_{F(D)}(q,r)     (classes 4/5)
  certified::Enclosure d_cutoff;       // Psi/(log Psi)^C
  certified::Enclosure l_cutoff;       // (log Psi)^{-C}
};

// The five-way partition of [1,Q]^2 by closeness of D to the total mass and
// by the reciprocal prime sums at the F-thresholds. Requires Psi(Q) >= 2.
PairClass classify_pair(uint32_t q, uint32_t r, uint32_t Q, const Rat& C,
                        const PsiFunction& psi, const Sieve& sieve);

struct MomentReport {
  uint32_t Q = 0;
  Rat psi_mass_value;            // Psi(Q)
  Rat sum_overlaps;              // sum_{q,r<=Q} lambda(A_q cap A_r)
  Rat ratio;                     // sum_overlaps / Psi(Q)^2 (0 if Psi = 0)
  std::optional<std::array<Rat, 5>> class_subtotals;  // by PairClassLabel
};

// Endpoint sweep: between consecutive arc endpoints the multiplicity
// sum_q 1_{A_q} is constant, so the square integrates in one pass. Equals the
// pairwise overlap double sum; O(M log M) in the number of arcs.
MomentReport second_moment(uint32_t Q, const PsiFunction& psi, const Sieve& sieve);

// Pairwise path with per-class subtotals; O(Q^2) intersections.
MomentReport second_moment_with_classes(uint32_t Q, const Rat& C,
                                        const PsiFunction& psi, const Sieve& sieve);

struct PropReport {
  Rat sum;                         // restricted square sum, exact
  certified::Enclosure reference;  // the bound's right side
  certified::Enclosure ratio;      // sum / reference
};

// Sum of (phi psi / q)(phi psi / r) over pairs with D(q,r) <= Psi(Q)/t,
// reported against Psi(Q)^2 / t^{1/5}.
PropReport proposition_sum_1(uint32_t Q, const Rat& t, const PsiFunction& psi);

// Same over pairs with D <= t Psi(Q) and L_{F_C(t)} >= F_C(t)^{-1/4},
// reported against Psi(Q)^2 / F_C(t)^{1/2}.
PropReport proposition_sum_2(uint32_t Q, const Rat& t, const Rat& C,
                             const PsiFunction& psi, const Sieve& sieve);

// Minimal Q with Psi(Q) >= e^{k^{1/sqrt(C)}}; requires C > 4 and the
// threshold to be reachable within the table.
uint32_t subsequence_qk(uint32_t k, const Rat& C, const PsiFunction& psi);

struct MonteCarloSample {
  uint64_t bits;   // alpha = bits / 2^64
  uint64_t count;  // S(Q, alpha)
  Rat deviation;   // |count/Psi - 1|
};

struct MonteCarloReport {
  uint32_t Q = 0;
  Rat psi_mass_value;
  std::vector<MonteCarloSample> samples;
  Rat max_deviation;
};

// Dyadic-rational sampling of S(Q, alpha)/Psi(Q); deterministic in the seed,
// independent of worker count.
MonteCarloReport monte_carlo_theorem1(uint32_t Q, const PsiFunction& psi,
                                      const Sieve& sieve, uint32_t samples,
                                      uint64_t seed, unsigned threads = 1);

}  // namespace redfrac
