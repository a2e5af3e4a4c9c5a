#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redfrac/certified.hpp"
#include "redfrac/rational.hpp"

namespace redfrac {

// Weight table n -> rational >= 0 with finite support; absent means 0.
// Extended to pairs as the product measure.
struct VertexMeasure {
  std::map<uint64_t, Rat> weight;

  Rat of(uint64_t n) const;
  Rat mass(const std::vector<uint64_t>& vertices) const;

  bool operator==(const VertexMeasure&) const = default;
};

struct PrimePair {
  uint32_t f = 0, g = 0;
  bool operator==(const PrimePair&) const = default;
};

// Septuple (mu, V, W, E, P, f, g). V, W, E sorted and unique; the maps f, g
// are carried as the value part of `primes`.
struct GcdGraph {
  VertexMeasure mu;
  std::vector<uint64_t> V, W;
  std::vector<std::pair<uint64_t, uint64_t>> E;
  std::map<uint64_t, PrimePair> primes;

  Rat mass_V() const { return mu.mass(V); }
  Rat mass_W() const { return mu.mass(W); }
  Rat mass_E() const;

  void normalize();  // sort + dedupe V, W, E

  bool operator==(const GcdGraph&) const = default;
};

// Axioms of the septuple; empty result means valid. Violations are data.
std::vector<std::string> validate(const GcdGraph& g);

// mu(E) / (mu(V) mu(W)), 0 on a degenerate graph.
Rat edge_density(const GcdGraph& g);

enum class Side { V, W };

struct Neighborhood {
  std::vector<uint64_t> set;
  Rat mass;
};

Neighborhood neighborhood(const GcdGraph& g, uint64_t vertex, Side side);

// R(G): primes outside P dividing gcd(v,w) of some edge. Ascending.
std::vector<uint64_t> remaining_primes(const GcdGraph& g);

// R-natural: p in R(G) such that for every k >= 0 the lighter side of the
// p^k-exact-valuation classes has relative mass <= 1 - 1/sqrt(p).
// The irrational threshold is decided exactly by squaring.
std::vector<uint64_t> r_music(const GcdGraph& g);

// Quality q(G) split into its exact rational part
//   delta^10 mu(V) mu(W) prod_{p in P} p^{|f-g|} / (1 - [f=g>=1]/p)^2
// and the transcendental factor prod_{p in P} (1 - p^{-31/30})^{-10},
// carried symbolically as the prime list so that ratios cancel.
struct Quality {
  Rat exact;
  std::vector<uint64_t> certified_primes;

  certified::Enclosure enclose(int prec) const;
};

Quality quality(const GcdGraph& g);

// Sign of q_a - factor * q_b, with common certified primes cancelled before
// any interval evaluation (so rational-only cases are decided exactly).
int quality_compare(const Quality& a, const Quality& b, const Rat& factor_on_b);

// G_{p^k, p^l}: restrict to vertices with exact p-valuation k resp. l and
// adjoin p to P. Requires p prime, p not in P.
GcdGraph specialize(const GcdGraph& g, uint64_t p, uint32_t k, uint32_t l);

struct PairChoice {
  uint32_t k = 0, l = 0;
  Rat edge_share;   // mu(E_{p^k,p^l}) / mu(E)
  Rat ratio_pow10;  // (edge_share / threshold)^10, exact
};

// Exhaustive search for a valuation pair satisfying the share bound
//   edge_share >= (alpha_k beta_k)^{9/10}            (k = l)
//   edge_share >= S / (40 (k-l)^2)                   (k != l)
// over classes with positive mass on both sides. Ties: largest ratio, then
// lexicographically smallest (k,l). Throws TheoremViolation with the
// serialized graph if no pair qualifies.
PairChoice find_pair(const GcdGraph& g, uint64_t p);

struct StepTrace {
  uint64_t p = 0;
  uint32_t k = 0, l = 0;
  Rat delta_before, delta_after;
  Quality quality_before, quality_after;
  Rat delta_ratio;  // delta_after/delta_before, exact
};

// One refinement step at p in R-natural(G): specialize at the find_pair
// choice and verify the displayed density and quality ratio bounds
// (>= 1 resp. 1/(20|k-l|^2) and >= 1 resp. p^{|k-l|-1/2}/(10^15 |k-l|^20)).
// A failed bound is a theorem violation, not an error state.
std::pair<GcdGraph, StepTrace> refine_step(const GcdGraph& g, uint64_t p);

// S^2/(alpha_k beta_l) >= R/2, evaluated exactly. Preconditions:
// alpha_k, beta_l > 0, alpha_k + alpha_l <= 1, beta_k + beta_l <= 1,
// R in [0, 1/sqrt(2)] (checked as 2R^2 <= 1).
bool check_share_bound(const Rat& alpha_k, const Rat& beta_k, const Rat& alpha_l,
                  const Rat& beta_l, const Rat& R);

struct PruneReport {
  GcdGraph graph;
  Rat removed_mass;              // mu(E \ E')
  Rat weighted_excess;           // sum_E mu(v)mu(w) S(v,w)
  bool retention_bound_checked;  // surrogate for "s sufficiently large" held
};

// Edge filter of the anatomy step: keep edges whose prime excess
// S(v,w) = sum_{p | vw/gcd^2, p >= s, p in R(G)} 1/p is at most 1/(4 s^{1/4}).
// Preconditions (checked, exact via fourth powers): delta >= s^{-1/4},
// R-natural(G) empty, every edge has L_s(v,w) >= s^{-1/4}.
PruneReport prune_excess_edges(const GcdGraph& g, const Rat& s);

// Iterated removal of vertices with mu(Gamma(v)) < (9/10) delta mu(other side),
// recomputing the density after each removal. Quality and density are
// non-decreasing at every single removal; both facts are asserted exactly.
GcdGraph regularize_neighborhoods(const GcdGraph& g);

struct IterationReport {
  std::vector<StepTrace> steps;
  Rat delta_ratio;     // final/initial, exact
  Quality q_initial, q_final;
  size_t p_diff_size = 0;
  bool branch_a = false;  // q(G') >= t^3 q(G)
  bool branch_b = false;  // delta ratio >= F_C(t)^{-1/4} and |P_diff| <= log t
};

// Quality-vs-density loop: repeatedly apply refine_step at the smallest prime of
// R-natural until it is empty; reports which branch of the dichotomy holds
// (possibly both or neither at small t).
std::pair<GcdGraph, IterationReport> iterate_quality_density(const GcdGraph& g,
                                                             const Rat& C,
                                                             const Rat& t);

struct GreedyReport {
  std::vector<StepTrace> steps;     // quality fields reused; no bound asserted
  Quality q_initial, q_final;
};

// Plumbing pass: for each remaining prime in increasing order, specialize at
// the valuation pair maximizing the resulting quality (ties lexicographic)
// until R(G') is empty. Reports the quality ratio with no lower-bound claim.
std::pair<GcdGraph, GreedyReport> greedy_empty_r(const GcdGraph& g);

struct PipelineReport {
  int variant = 1;
  bool pruned = false;                 // variant 2 only: whether the edge filter ran
  std::optional<IterationReport> iteration;
  GreedyReport greedy;
  Quality q_initial, q_final;
};

// Good-subgraph pipelines. Variant 1: greedy_empty_r then regularize_neighborhoods.
// Variant 2: iterate_quality_density, then the edge filter when its
// preconditions hold at s = F_C(t), then greedy_empty_r, then regularize_neighborhoods.
// Output always has R = empty and the 9/10 neighborhood properties.
std::pair<GcdGraph, PipelineReport> good_subgraph_pipeline(const GcdGraph& g, const Rat& C,
                                                     const Rat& t, int variant);

// true iff child is a GCD subgraph of parent (same mu, nested vertex/edge
// sets, extended prime map).
bool is_subgraph(const GcdGraph& child, const GcdGraph& parent);

// Line-record serialization; round-trip lossless.
void write_gcdgraph(std::ostream& out, const GcdGraph& g);
GcdGraph read_gcdgraph(std::istream& in);
std::string gcdgraph_to_string(const GcdGraph& g);
GcdGraph gcdgraph_from_string(const std::string& text);

}  // namespace redfrac
