#include "redfrac/gcdgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "redfrac/arith.hpp"
#include "redfrac/errors.hpp"

namespace redfrac {

namespace {

uint32_t valuation(uint64_t n, uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation of 0 is undefined");
  uint32_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// Relative masses of the exact-valuation classes of `vertices` at p.
std::map<uint32_t, Rat> class_shares(const VertexMeasure& mu,
                                     const std::vector<uint64_t>& vertices,
                                     uint64_t p, const Rat& total) {
  std::map<uint32_t, Rat> shares;
  for (uint64_t v : vertices) {
    Rat w = mu.of(v);
    if (w == 0) continue;
    shares[valuation(v, p)] += w;
  }
  for (auto& [k, m] : shares) m /= total;
  return shares;
}

// x <= 1 - 1/sqrt(p), decided exactly: equivalent to p (1-x)^2 >= 1 (x <= 1).
bool below_sqrt_threshold(const Rat& x, uint64_t p) {
  Rat om = 1 - x;
  if (om < 0) return false;
  return Rat(Int(static_cast<unsigned long>(p))) * om * om >= 1;
}

certified::Enclosure certified_prime_factor(uint64_t p, int prec) {
  using namespace certified;
  // (1 - p^{-31/30})^{-10}
  Enclosure base = enc_pow(enc_point(Rat(Int(static_cast<unsigned long>(p)))),
                           make_rat(-31, 30), prec);
  Enclosure one_minus = enc_point(Rat(1)) - base;
  return enc_ipow(one_minus, -10);
}

certified::Enclosure certified_primes_product(const std::vector<uint64_t>& primes,
                                              int prec) {
  certified::Enclosure prod = certified::enc_point(Rat(1));
  for (uint64_t p : primes) prod = prod * certified_prime_factor(p, prec);
  return prod;
}

}  // namespace

Rat VertexMeasure::of(uint64_t n) const {
  auto it = weight.find(n);
  return it == weight.end() ? Rat(0) : it->second;
}

Rat VertexMeasure::mass(const std::vector<uint64_t>& vertices) const {
  Rat total(0);
  for (uint64_t v : vertices) total += of(v);
  return total;
}

Rat GcdGraph::mass_E() const {
  Rat total(0);
  for (const auto& [v, w] : E) total += mu.of(v) * mu.of(w);
  return total;
}

void GcdGraph::normalize() {
  auto dedupe = [](std::vector<uint64_t>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  dedupe(V);
  dedupe(W);
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
}

std::vector<std::string> validate(const GcdGraph& g) {
  std::vector<std::string> out;
  auto note = [&out](std::string s) { out.push_back(std::move(s)); };

  for (uint64_t v : g.V)
    if (v == 0) note("vertex 0 in V");
  for (uint64_t w : g.W)
    if (w == 0) note("vertex 0 in W");
  if (!out.empty()) return out;  // valuations below need positive labels
  if (!std::is_sorted(g.V.begin(), g.V.end())) note("V not sorted");
  if (!std::is_sorted(g.W.begin(), g.W.end())) note("W not sorted");
  for (const auto& [n, wt] : g.mu.weight)
    if (wt < 0) note("negative weight at " + std::to_string(n));

  std::set<uint64_t> vs(g.V.begin(), g.V.end()), ws(g.W.begin(), g.W.end());
  for (const auto& [v, w] : g.E)
    if (!vs.count(v) || !ws.count(w))
      note("edge (" + std::to_string(v) + "," + std::to_string(w) + ") outside VxW");

  for (const auto& [p, fg] : g.primes) {
    Factorization f = factorize_trial(p);
    if (f.size() != 1 || f[0].exponent != 1) {
      note("P contains non-prime " + std::to_string(p));
      continue;
    }
    // (i) p^f | v, p^g | w
    for (uint64_t v : g.V)
      if (valuation(v, p) < fg.f)
        note("axiom i: p^f does not divide v=" + std::to_string(v) + " at p=" +
             std::to_string(p));
    for (uint64_t w : g.W)
      if (valuation(w, p) < fg.g)
        note("axiom i: p^g does not divide w=" + std::to_string(w) + " at p=" +
             std::to_string(p));
    // (ii) exact valuation of gcd on edges
    uint32_t mn = std::min(fg.f, fg.g);
    for (const auto& [v, w] : g.E)
      if (std::min(valuation(v, p), valuation(w, p)) != mn)
        note("axiom ii: p^min(f,g) not exact in gcd at edge (" + std::to_string(v) +
             "," + std::to_string(w) + "), p=" + std::to_string(p));
    // (iii) exact valuations on all vertices when f != g
    if (fg.f != fg.g) {
      for (uint64_t v : g.V)
        if (valuation(v, p) != fg.f)
          note("axiom iii: p^f not exact at v=" + std::to_string(v) + ", p=" +
               std::to_string(p));
      for (uint64_t w : g.W)
        if (valuation(w, p) != fg.g)
          note("axiom iii: p^g not exact at w=" + std::to_string(w) + ", p=" +
               std::to_string(p));
    }
  }
  return out;
}

Rat edge_density(const GcdGraph& g) {
  Rat denom = g.mass_V() * g.mass_W();
  if (denom == 0) return Rat(0);
  return g.mass_E() / denom;
}

Neighborhood neighborhood(const GcdGraph& g, uint64_t vertex, Side side) {
  const std::vector<uint64_t>& own = side == Side::V ? g.V : g.W;
  if (std::find(own.begin(), own.end(), vertex) == own.end())
    throw std::invalid_argument("neighborhood: vertex " + std::to_string(vertex) +
                                " not on the requested side");
  Neighborhood nb;
  nb.mass = Rat(0);
  for (const auto& [v, w] : g.E) {
    uint64_t self = side == Side::V ? v : w;
    uint64_t other = side == Side::V ? w : v;
    if (self == vertex) nb.set.push_back(other);
  }
  std::sort(nb.set.begin(), nb.set.end());
  nb.set.erase(std::unique(nb.set.begin(), nb.set.end()), nb.set.end());
  for (uint64_t u : nb.set) nb.mass += g.mu.of(u);
  return nb;
}

std::vector<uint64_t> remaining_primes(const GcdGraph& g) {
  std::set<uint64_t> acc;
  for (const auto& [v, w] : g.E) {
    uint64_t d = gcd_u64(v, w);
    for (const auto& [p, e] : factorize_trial(d))
      if (!g.primes.count(p)) acc.insert(p);
  }
  return {acc.begin(), acc.end()};
}

std::vector<uint64_t> r_music(const GcdGraph& g) {
  Rat mv = g.mass_V(), mw = g.mass_W();
  if (mv == 0 || mw == 0)
    throw std::invalid_argument("r_music: requires positive vertex masses");
  std::vector<uint64_t> out;
  for (uint64_t p : remaining_primes(g)) {
    std::map<uint32_t, Rat> av = class_shares(g.mu, g.V, p, mv);
    std::map<uint32_t, Rat> bw = class_shares(g.mu, g.W, p, mw);
    // Only classes with positive mass on both sides can break the condition.
    bool all_below = true;
    for (const auto& [k, alpha] : av) {
      auto it = bw.find(k);
      if (it == bw.end()) continue;
      const Rat& m = std::min(alpha, it->second);
      if (!below_sqrt_threshold(m, p)) {
        all_below = false;
        break;
      }
    }
    if (all_below) out.push_back(p);
  }
  return out;
}

certified::Enclosure Quality::enclose(int prec) const {
  if (exact == 0) return certified::enc_point(Rat(0));
  return certified_primes_product(certified_primes, prec) * exact;
}

Quality quality(const GcdGraph& g) {
  Quality q;
  q.certified_primes.reserve(g.primes.size());
  for (const auto& [p, fg] : g.primes) q.certified_primes.push_back(p);

  Rat me = g.mass_E();
  Rat denom = g.mass_V() * g.mass_W();
  if (me == 0 || denom == 0) {
    q.exact = Rat(0);
    return q;
  }
  // delta^10 mu(V) mu(W) = mu(E)^10 / (mu(V) mu(W))^9
  q.exact = rat_pow(me, 10) / rat_pow(denom, 9);
  for (const auto& [p, fg] : g.primes) {
    Rat pr{Int(static_cast<unsigned long>(p))};
    uint32_t diff = fg.f > fg.g ? fg.f - fg.g : fg.g - fg.f;
    q.exact *= rat_pow(pr, diff);
    if (fg.f == fg.g && fg.f >= 1) {
      Rat om = 1 - 1 / pr;  // (1 - 1/p)^-2
      q.exact /= om * om;
    }
  }
  return q;
}

int quality_compare(const Quality& a, const Quality& b, const Rat& factor_on_b) {
  Rat rhs_exact = b.exact * factor_on_b;
  // signs decide first; certified factors are strictly positive
  if (a.exact == 0 && rhs_exact == 0) return 0;
  if (a.exact <= 0 && rhs_exact >= 0) return a.exact < rhs_exact ? -1 : (a.exact == rhs_exact ? 0 : 1);
  if (a.exact >= 0 && rhs_exact <= 0) return 1;

  // cancel shared primes
  std::vector<uint64_t> pa = a.certified_primes, pb = b.certified_primes;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  std::vector<uint64_t> only_a, only_b;
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(only_a));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(), std::back_inserter(only_b));

  if (only_a.empty() && only_b.empty())
    return a.exact < rhs_exact ? -1 : (a.exact == rhs_exact ? 0 : 1);
  // each leftover factor exceeds 1: cheap one-sided decisions (positive case)
  if (only_b.empty() && a.exact > 0 && a.exact >= rhs_exact) return 1;
  if (only_a.empty() && rhs_exact > 0 && rhs_exact >= a.exact) return -1;

  certified::EncFn lhs = [exact = a.exact, primes = only_a](int prec) {
    return certified_primes_product(primes, prec) * exact;
  };
  certified::EncFn rhs = [exact = rhs_exact, primes = only_b](int prec) {
    return certified_primes_product(primes, prec) * exact;
  };
  return certified::compare(lhs, rhs);
}

GcdGraph specialize(const GcdGraph& g, uint64_t p, uint32_t k, uint32_t l) {
  Factorization fp = factorize_trial(p);
  if (fp.size() != 1 || fp[0].exponent != 1)
    throw std::invalid_argument("specialize: p must be prime");
  if (g.primes.count(p))
    throw std::invalid_argument("specialize: p already in P");

  GcdGraph out;
  out.mu = g.mu;
  for (uint64_t v : g.V)
    if (valuation(v, p) == k) out.V.push_back(v);
  for (uint64_t w : g.W)
    if (valuation(w, p) == l) out.W.push_back(w);
  std::set<uint64_t> vs(out.V.begin(), out.V.end()), ws(out.W.begin(), out.W.end());
  for (const auto& e : g.E)
    if (vs.count(e.first) && ws.count(e.second)) out.E.push_back(e);
  out.primes = g.primes;
  out.primes[p] = PrimePair{k, l};

  if (auto violations = validate(out); !violations.empty())
    throw TheoremViolation("specialize produced an invalid septuple: " + violations.front(),
                           gcdgraph_to_string(out));
  return out;
}

PairChoice find_pair(const GcdGraph& g, uint64_t p) {
  Rat mv = g.mass_V(), mw = g.mass_W(), me = g.mass_E();
  if (mv == 0 || mw == 0 || me == 0)
    throw std::invalid_argument("find_pair: requires positive masses");
  {
    auto R = remaining_primes(g);
    if (std::find(R.begin(), R.end(), p) == R.end())
      throw std::invalid_argument("find_pair: p not in R(G)");
  }

  std::map<uint32_t, Rat> alpha = class_shares(g.mu, g.V, p, mv);
  std::map<uint32_t, Rat> beta = class_shares(g.mu, g.W, p, mw);
  auto share_of = [&](uint32_t k, uint32_t l) -> Rat {
    Rat s(0);
    for (const auto& [v, w] : g.E)
      if (valuation(v, p) == k && valuation(w, p) == l) s += g.mu.of(v) * g.mu.of(w);
    return s / me;
  };
  auto coeff = [](const std::map<uint32_t, Rat>& m, uint32_t k) {
    auto it = m.find(k);
    return it == m.end() ? Rat(0) : it->second;
  };

  std::optional<PairChoice> best;
  for (const auto& [k, ak] : alpha) {
    for (const auto& [l, bl] : beta) {
      Rat share = share_of(k, l);
      Rat ratio10;
      if (k == l) {
        ratio10 = rat_pow(share, 10) / rat_pow(ak * bl, 9);
      } else {
        Rat al = coeff(alpha, l), bk = coeff(beta, k);
        Rat S = ak * (1 - bk) + bk * (1 - ak) + al * (1 - bl) + bl * (1 - al);
        // S > 0 whenever alpha_k, beta_l > 0 and the class shares sum to <= 1
        Rat diff{Int(static_cast<unsigned long>(k > l ? k - l : l - k))};
        Rat threshold = S / (40 * diff * diff);
        ratio10 = rat_pow(share / threshold, 10);
      }
      if (!best || ratio10 > best->ratio_pow10)
        best = PairChoice{k, l, share, ratio10};
    }
  }
  if (!best || best->ratio_pow10 < 1)
    throw TheoremViolation(
        "find_pair: no valuation pair meets the guaranteed share bound at p=" +
            std::to_string(p),
        gcdgraph_to_string(g));
  return *best;
}

std::pair<GcdGraph, StepTrace> refine_step(const GcdGraph& g, uint64_t p) {
  {
    auto rn = r_music(g);
    if (std::find(rn.begin(), rn.end(), p) == rn.end())
      throw std::invalid_argument("refine_step: p not in R-natural(G)");
  }
  Rat delta_before = edge_density(g);
  if (delta_before == 0) throw std::invalid_argument("refine_step: requires delta > 0");

  PairChoice pc = find_pair(g, p);
  GcdGraph out = specialize(g, p, pc.k, pc.l);

  StepTrace tr;
  tr.p = p;
  tr.k = pc.k;
  tr.l = pc.l;
  tr.delta_before = delta_before;
  tr.delta_after = edge_density(out);
  tr.quality_before = quality(g);
  tr.quality_after = quality(out);
  tr.delta_ratio = tr.delta_after / tr.delta_before;

  if (pc.k == pc.l) {
    if (tr.delta_ratio < 1)
      throw TheoremViolation("refine_step: density ratio below 1 in diagonal case",
                             gcdgraph_to_string(g));
    if (quality_compare(tr.quality_after, tr.quality_before, Rat(1)) < 0)
      throw TheoremViolation("refine_step: quality ratio below 1 in diagonal case",
                             gcdgraph_to_string(g));
  } else {
    uint32_t d = pc.k > pc.l ? pc.k - pc.l : pc.l - pc.k;
    Rat dd{Int(static_cast<unsigned long>(d))};
    if (tr.delta_ratio * 20 * dd * dd < 1)
      throw TheoremViolation("refine_step: density ratio below 1/(20|k-l|^2)",
                             gcdgraph_to_string(g));
    // q'/q >= p^{|k-l| - 1/2} / (10^15 |k-l|^20)
    Rat scale = rat_pow(dd, 20) * rat_pow(Rat(10), 15);
    certified::EncFn rhs_extra = [p, d, scale](int prec) {
      using namespace certified;
      Enclosure pw = enc_pow(enc_point(Rat(Int(static_cast<unsigned long>(p)))),
                             Rat(Int(d)) - make_rat(1, 2), prec);
      return pw * (1 / scale);
    };
    Quality qa = tr.quality_after, qb = tr.quality_before;
    // compare qa >= qb * rhs_extra with shared primes cancelled
    std::vector<uint64_t> only_a;
    std::set_difference(qa.certified_primes.begin(), qa.certified_primes.end(),
                        qb.certified_primes.begin(), qb.certified_primes.end(),
                        std::back_inserter(only_a));
    certified::EncFn lhs = [exact = qa.exact, primes = only_a](int prec) {
      return certified_primes_product(primes, prec) * exact;
    };
    certified::EncFn rhs = [exact = qb.exact, rhs_extra](int prec) {
      return rhs_extra(prec) * exact;
    };
    if (certified::compare(lhs, rhs) < 0)
      throw TheoremViolation("refine_step: quality ratio below p^{|k-l|-1/2}/(10^15 |k-l|^20)",
                             gcdgraph_to_string(g));
  }
  return {std::move(out), std::move(tr)};
}

bool check_share_bound(const Rat& alpha_k, const Rat& beta_k, const Rat& alpha_l,
                  const Rat& beta_l, const Rat& R) {
  auto in_unit = [](const Rat& x) { return x >= 0 && x <= 1; };
  if (!in_unit(alpha_k) || !in_unit(beta_k) || !in_unit(alpha_l) || !in_unit(beta_l))
    throw std::invalid_argument("check_share_bound: shares must lie in [0,1]");
  if (alpha_k <= 0 || beta_l <= 0)
    throw std::invalid_argument("check_share_bound: requires alpha_k, beta_l > 0");
  if (alpha_k + alpha_l > 1 || beta_k + beta_l > 1)
    throw std::invalid_argument("check_share_bound: class shares must sum to at most 1");
  if (R < 0 || 2 * R * R > 1)
    throw std::invalid_argument("check_share_bound: R must lie in [0, 1/sqrt(2)]");
  Rat S = alpha_k * (1 - beta_k) + beta_k * (1 - alpha_k) + alpha_l * (1 - beta_l) +
          beta_l * (1 - alpha_l);
  return 2 * S * S >= R * alpha_k * beta_l;
}

PruneReport prune_excess_edges(const GcdGraph& g, const Rat& s) {
  if (s < 1) throw std::invalid_argument("prune_excess_edges: s must be >= 1");
  Rat delta = edge_density(g);
  // delta >= s^{-1/4}  <=>  delta^4 s >= 1
  if (rat_pow(delta, 4) * s < 1)
    throw std::invalid_argument("prune_excess_edges: density below s^{-1/4}");
  if (!r_music(g).empty())
    throw std::invalid_argument("prune_excess_edges: R-natural(G) must be empty");

  auto R = remaining_primes(g);
  std::set<uint64_t> rset(R.begin(), R.end());

  auto tail_primes = [&s](uint64_t v, uint64_t w) {
    std::vector<uint64_t> ps;
    for (uint64_t p : ratio_primes(v, w))
      if (Rat(Int(static_cast<unsigned long>(p))) >= s) ps.push_back(p);
    return ps;
  };

  std::vector<std::pair<uint64_t, uint64_t>> kept;
  Rat removed_mass(0), weighted_excess(0);
  for (const auto& [v, w] : g.E) {
    Rat Ls(0), Sv(0);
    for (uint64_t p : tail_primes(v, w)) {
      Rat inv = make_rat(Int(1), Int(static_cast<unsigned long>(p)));
      Ls += inv;
      if (rset.count(p)) Sv += inv;
    }
    // every edge must satisfy L_s >= s^{-1/4}
    if (rat_pow(Ls, 4) * s < 1)
      throw std::invalid_argument("prune_excess_edges: edge (" + std::to_string(v) + "," +
                                  std::to_string(w) + ") violates L_s >= s^{-1/4}");
    weighted_excess += g.mu.of(v) * g.mu.of(w) * Sv;
    // keep iff S <= 1/(4 s^{1/4})  <=>  256 S^4 s <= 1
    if (256 * rat_pow(Sv, 4) * s <= 1) {
      kept.emplace_back(v, w);
      // surviving edges: sum over p not in R(G) is at least L_s - 1/(4 s^{1/4})
      Rat off_r = Ls - Sv;
      Rat gap = Ls - off_r;  // = Sv <= 1/(4 s^{1/4}) by the filter
      if (256 * rat_pow(gap, 4) * s > 1)
        throw TheoremViolation("prune_excess_edges: edge-inclusion postcondition failed",
                               gcdgraph_to_string(g));
    } else {
      removed_mass += g.mu.of(v) * g.mu.of(w);
    }
  }

  // Markov step, unconditional: mu(E\E') <= 4 s^{1/4} sum mu mu S
  if (rat_pow(removed_mass, 4) > 256 * s * rat_pow(weighted_excess, 4))
    throw TheoremViolation("prune_excess_edges: Markov bound on removed mass failed",
                           gcdgraph_to_string(g));

  PruneReport rep;
  rep.graph = g;
  rep.graph.E = std::move(kept);
  rep.removed_mass = removed_mass;
  rep.weighted_excess = weighted_excess;

  // 24/25 retention, only under the small-excess surrogate
  Rat me = g.mass_E();
  rep.retention_bound_checked =
      rat_pow(100 * weighted_excess, 4) * s <= rat_pow(me, 4);
  if (rep.retention_bound_checked && me > 0) {
    if (rep.graph.mass_E() * 25 < me * 24)
      throw TheoremViolation("prune_excess_edges: retention below 24/25 despite small excess",
                             gcdgraph_to_string(g));
  }
  return rep;
}

GcdGraph regularize_neighborhoods(const GcdGraph& g) {
  if (edge_density(g) == 0)
    throw std::invalid_argument("regularize_neighborhoods: requires delta > 0");
  GcdGraph cur = g;
  const Rat nine_tenths = make_rat(9, 10);
  for (;;) {
    Rat delta = edge_density(cur);
    Rat mv = cur.mass_V(), mw = cur.mass_W();
    Quality q_before = quality(cur);

    uint64_t victim = 0;
    Side side = Side::V;
    bool found = false;
    for (uint64_t v : cur.V) {
      if (neighborhood(cur, v, Side::V).mass < nine_tenths * delta * mw) {
        victim = v;
        side = Side::V;
        found = true;
        break;
      }
    }
    if (!found) {
      for (uint64_t w : cur.W) {
        if (neighborhood(cur, w, Side::W).mass < nine_tenths * delta * mv) {
          victim = w;
          side = Side::W;
          found = true;
          break;
        }
      }
    }
    if (!found) break;

    GcdGraph next = cur;
    auto& own = side == Side::V ? next.V : next.W;
    own.erase(std::remove(own.begin(), own.end(), victim), own.end());
    std::erase_if(next.E, [&](const auto& e) {
      return (side == Side::V ? e.first : e.second) == victim;
    });

    // one removal never decreases density or quality; both exact
    if (edge_density(next) < delta)
      throw TheoremViolation("regularize_neighborhoods: density decreased on vertex removal",
                             gcdgraph_to_string(cur));
    if (quality_compare(quality(next), q_before, Rat(1)) < 0)
      throw TheoremViolation("regularize_neighborhoods: quality decreased on vertex removal",
                             gcdgraph_to_string(cur));
    cur = std::move(next);
  }
  return cur;
}

std::pair<GcdGraph, IterationReport> iterate_quality_density(const GcdGraph& g,
                                                             const Rat& C,
                                                             const Rat& t) {
  if (!g.primes.empty())
    throw std::invalid_argument("iterate_quality_density: requires P = empty");
  if (C < 1 || t < 1)
    throw std::invalid_argument("iterate_quality_density: requires C, t >= 1");
  Rat delta0 = edge_density(g);
  if (delta0 == 0) throw std::invalid_argument("iterate_quality_density: requires delta > 0");

  IterationReport rep;
  rep.q_initial = quality(g);
  GcdGraph cur = g;
  for (;;) {
    std::vector<uint64_t> rn = r_music(cur);
    if (rn.empty()) break;
    auto [next, tr] = refine_step(cur, rn.front());
    rep.steps.push_back(std::move(tr));
    cur = std::move(next);
  }
  rep.q_final = quality(cur);
  rep.delta_ratio = edge_density(cur) / delta0;
  for (const auto& [p, fg] : cur.primes)
    if (fg.f != fg.g) ++rep.p_diff_size;

  rep.branch_a = quality_compare(rep.q_final, rep.q_initial, rat_pow(t, 3)) >= 0;

  // branch b: delta ratio >= F_C(t)^{-1/4} and |P_diff| <= log t
  certified::EncFn f_inv_quarter = [C, t](int prec) {
    return certified::enc_pow(f_threshold_enclosure(C, t, prec), make_rat(-1, 4), prec);
  };
  bool delta_ok = certified::compare(f_inv_quarter, rep.delta_ratio) <= 0;
  certified::EncFn log_t = [t](int prec) {
    return certified::enc_log(certified::enc_point(t), prec);
  };
  bool pdiff_ok =
      certified::compare(log_t, Rat(Int(static_cast<unsigned long>(rep.p_diff_size)))) >= 0;
  rep.branch_b = delta_ok && pdiff_ok;
  return {std::move(cur), std::move(rep)};
}

std::pair<GcdGraph, GreedyReport> greedy_empty_r(const GcdGraph& g) {
  if (edge_density(g) == 0)
    throw std::invalid_argument("greedy_empty_r: requires delta > 0");
  GreedyReport rep;
  rep.q_initial = quality(g);
  GcdGraph cur = g;
  for (;;) {
    std::vector<uint64_t> R = remaining_primes(cur);
    if (R.empty()) break;
    uint64_t p = R.front();

    std::set<uint32_t> vks, wls;
    for (uint64_t v : cur.V) vks.insert(valuation(v, p));
    for (uint64_t w : cur.W) wls.insert(valuation(w, p));

    Quality q_cur = quality(cur);
    Rat delta_cur = edge_density(cur);
    std::optional<std::pair<GcdGraph, StepTrace>> best;
    std::optional<Quality> best_q;
    for (uint32_t k : vks) {
      for (uint32_t l : wls) {
        GcdGraph cand = specialize(cur, p, k, l);
        Quality qc = quality(cand);
        if (best_q && quality_compare(qc, *best_q, Rat(1)) <= 0) continue;
        StepTrace tr;
        tr.p = p;
        tr.k = k;
        tr.l = l;
        tr.delta_before = delta_cur;
        tr.delta_after = edge_density(cand);
        tr.quality_before = q_cur;
        tr.quality_after = qc;
        tr.delta_ratio = delta_cur == 0 ? Rat(0) : tr.delta_after / delta_cur;
        best = {std::move(cand), std::move(tr)};
        best_q = std::move(qc);
      }
    }
    rep.steps.push_back(best->second);
    cur = std::move(best->first);
  }
  rep.q_final = quality(cur);
  return {std::move(cur), std::move(rep)};
}

std::pair<GcdGraph, PipelineReport> good_subgraph_pipeline(const GcdGraph& g, const Rat& C,
                                                     const Rat& t, int variant) {
  if (!g.primes.empty())
    throw std::invalid_argument("good_subgraph_pipeline: requires P = empty");
  if (edge_density(g) == 0)
    throw std::invalid_argument("good_subgraph_pipeline: requires delta > 0");
  if (variant != 1 && variant != 2)
    throw std::invalid_argument("good_subgraph_pipeline: variant must be 1 or 2");

  PipelineReport rep;
  rep.variant = variant;
  rep.q_initial = quality(g);
  GcdGraph cur = g;

  if (variant == 2) {
    auto [iterated, irep] = iterate_quality_density(cur, C, t);
    cur = std::move(iterated);
    rep.iteration = std::move(irep);

    // the edge filter runs with a rational stand-in for F_C(t), taken from
    // the upper end of its certificate
    Rat s = certified::refine_relative(f_threshold_fn(C, t), 40).hi;
    bool preconds = rat_pow(edge_density(cur), 4) * s >= 1 && r_music(cur).empty();
    if (preconds) {
      for (const auto& [v, w] : cur.E) {
        if (rat_pow(l_sum(s, v, w), 4) * s < 1) {
          preconds = false;
          break;
        }
      }
    }
    if (preconds) {
      PruneReport pr = prune_excess_edges(cur, s);
      cur = std::move(pr.graph);
      rep.pruned = true;
    }
  }

  if (edge_density(cur) > 0) {
    auto [reduced, grep] = greedy_empty_r(cur);
    cur = std::move(reduced);
    rep.greedy = std::move(grep);
    cur = regularize_neighborhoods(cur);
  }

  if (!remaining_primes(cur).empty())
    throw TheoremViolation("good_subgraph_pipeline: output still has remaining primes",
                           gcdgraph_to_string(cur));
  if (auto violations = validate(cur); !violations.empty())
    throw TheoremViolation("good_subgraph_pipeline: output fails validation: " + violations.front(),
                           gcdgraph_to_string(cur));
  rep.q_final = quality(cur);
  return {std::move(cur), std::move(rep)};
}

bool is_subgraph(const GcdGraph& child, const GcdGraph& parent) {
  if (child.mu.weight != parent.mu.weight) return false;
  auto contains = [](const std::vector<uint64_t>& big, const std::vector<uint64_t>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  };
  if (!contains(parent.V, child.V) || !contains(parent.W, child.W)) return false;
  if (!std::includes(parent.E.begin(), parent.E.end(), child.E.begin(), child.E.end()))
    return false;
  for (const auto& [p, fg] : parent.primes) {
    auto it = child.primes.find(p);
    if (it == child.primes.end() || !(it->second == fg)) return false;
  }
  return true;
}

void write_gcdgraph(std::ostream& out, const GcdGraph& g) {
  out << "gcdgraph\n";
  for (const auto& [n, wt] : g.mu.weight) out << "mu " << n << " " << rat_str(wt) << "\n";
  out << "V";
  for (uint64_t v : g.V) out << " " << v;
  out << "\nW";
  for (uint64_t w : g.W) out << " " << w;
  out << "\n";
  for (const auto& [v, w] : g.E) out << "E " << v << " " << w << "\n";
  for (const auto& [p, fg] : g.primes)
    out << "P " << p << " " << fg.f << " " << fg.g << "\n";
}

GcdGraph read_gcdgraph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "gcdgraph")
    throw std::invalid_argument("gcd graph file: missing 'gcdgraph' header");
  GcdGraph g;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "mu") {
      uint64_t n;
      std::string val;
      if (!(ls >> n >> val) || n == 0)
        throw std::invalid_argument("gcd graph file: bad mu line");
      g.mu.weight[n] = parse_rat(val);
    } else if (tag == "V" || tag == "W") {
      auto& side = tag == "V" ? g.V : g.W;
      uint64_t n;
      while (ls >> n) {
        if (n == 0) throw std::invalid_argument("gcd graph file: vertex labels are positive");
        side.push_back(n);
      }
    } else if (tag == "E") {
      uint64_t v, w;
      if (!(ls >> v >> w) || v == 0 || w == 0)
        throw std::invalid_argument("gcd graph file: bad E line");
      g.E.emplace_back(v, w);
    } else if (tag == "P") {
      uint64_t p;
      uint32_t f, gg;
      if (!(ls >> p >> f >> gg)) throw std::invalid_argument("gcd graph file: bad P line");
      g.primes[p] = PrimePair{f, gg};
    } else {
      throw std::invalid_argument("gcd graph file: unknown tag '" + tag + "'");
    }
  }
  g.normalize();
  return g;
}

std::string gcdgraph_to_string(const GcdGraph& g) {
  std::ostringstream os;
  write_gcdgraph(os, g);
  return os.str();
}

GcdGraph gcdgraph_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_gcdgraph(is);
}

}  // namespace redfrac
