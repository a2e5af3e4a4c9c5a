#pragma once

#include <cstdint>
#include <vector>

#include "redfrac/arith.hpp"
#include "redfrac/psi.hpp"
#include "redfrac/rational.hpp"

namespace redfrac {

// Open arc on R/Z. Stored with 0 <= left < 1 and 0 < right - left <= 1; a
// right endpoint beyond 1 encodes wrap-around through 0.
struct Arc {
  Rat left, right;
  Rat length() const { return right - left; }
  bool operator==(const Arc&) const = default;
};

// Canonical disjoint union of open arcs: sorted by left endpoint, interiors
// pairwise disjoint on the torus. Arcs touching at a single point stay
// separate, except across the 0 seam where pieces are re-glued into one
// wrapped arc (endpoint sets are null, so the measure is unaffected).
class TorusIntervalUnion {
 public:
  TorusIntervalUnion() = default;
  static TorusIntervalUnion from_arcs(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  Rat measure() const;

  bool operator==(const TorusIntervalUnion&) const = default;

 private:
  friend TorusIntervalUnion detail_make_canonical(std::vector<Arc> arcs);
  std::vector<Arc> arcs_;
};

// Internal: adopts an already-canonical arc list without re-normalizing.
TorusIntervalUnion detail_make_canonical(std::vector<Arc> arcs);

inline Rat measure(const TorusIntervalUnion& u) { return u.measure(); }

// A_q: open arcs of radius psi(q)/q around the reduced fractions p/q, mod 1.
// Exact measure 2 phi(q) psi(q) / q (arcs never overlap since psi <= 1/2).
TorusIntervalUnion approx_set(uint32_t q, const PsiFunction& psi);
TorusIntervalUnion approx_set(uint32_t q, const PsiFunction& psi, const Sieve& sieve);

TorusIntervalUnion intersect(const TorusIntervalUnion& a, const TorusIntervalUnion& b);

// lambda(A_q cap A_r) by arc intersection. Ground truth for overlap_crt.
Rat overlap_exact(uint32_t q, uint32_t r, const PsiFunction& psi);
Rat overlap_exact(uint32_t q, uint32_t r, const PsiFunction& psi, const Sieve& sieve);

struct OverlapProfile {
  Rat small_delta;  // min(psi(q)/q, psi(r)/r)
  Rat big_delta;    // max(psi(q)/q, psi(r)/r)
  LmnSplit split;
};

OverlapProfile overlap_profile(uint32_t q, uint32_t r, const PsiFunction& psi);

// Piecewise-linear overlap kernel:
//   2*delta          for 0 <= y <= Delta - delta
//   Delta+delta - y  for Delta - delta < y <= Delta + delta
//   0                otherwise
Rat w_function(const Rat& y, const OverlapProfile& profile);

// lambda(A_q cap A_r) as the finite Chinese-remainder sum
//   sum_{1<=c<=ln, gcd(c,n)=1} 2 w(c/(ln)) phi(m) l
//       prod_{p | gcd(l,c)} (1 - 1/p) prod_{p | l, p∤c} (1 - 2/p).
// Requires q != r. Agrees exactly with overlap_exact.
Rat overlap_crt(uint32_t q, uint32_t r, const PsiFunction& psi);

// Psi(Q) = sum_{q<=Q} 2 phi(q) psi(q) / q.
Rat psi_mass(uint32_t Q, const PsiFunction& psi);
Rat psi_mass(uint32_t Q, const PsiFunction& psi, const std::vector<uint64_t>& phi);

}  // namespace redfrac
