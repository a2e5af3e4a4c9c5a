#include "redfrac/measure.hpp"

#include <algorithm>
#include <stdexcept>

namespace redfrac {

namespace {

// Linear open segment inside [0,1]; wrapped arcs are split into two of these.
struct Segment {
  Rat left, right;
};

std::vector<Segment> unwrap(const std::vector<Arc>& arcs) {
  std::vector<Segment> segs;
  segs.reserve(arcs.size() + 1);
  for (const Arc& a : arcs) {
    if (a.right > 1) {
      segs.push_back({a.left, Rat(1)});
      segs.push_back({Rat(0), a.right - 1});
    } else {
      segs.push_back({a.left, a.right});
    }
  }
  auto by_left = [](const Segment& x, const Segment& y) { return x.left < y.left; };
  if (!std::is_sorted(segs.begin(), segs.end(), by_left))
    std::sort(segs.begin(), segs.end(), by_left);
  return segs;
}

// Merge strictly-overlapping segments (union semantics); segments touching at
// a single point stay separate. Input sorted by left.
std::vector<Segment> merge_overlaps(std::vector<Segment> segs) {
  std::vector<Segment> merged;
  merged.reserve(segs.size());
  for (Segment& s : segs) {
    if (!merged.empty() && s.left < merged.back().right) {
      if (s.right > merged.back().right) merged.back().right = std::move(s.right);
    } else {
      merged.push_back(std::move(s));
    }
  }
  return merged;
}

// Builds the union from sorted, interior-disjoint segments, re-gluing the two
// pieces that touch the 0 seam into one wrapped arc.
TorusIntervalUnion canonical_from_segments(std::vector<Segment> segs) {
  if (segs.size() >= 2 && segs.front().left == 0 && segs.back().right == 1) {
    Segment head = std::move(segs.front());
    segs.erase(segs.begin());
    segs.back().right = Rat(1) + head.right;
    std::sort(segs.begin(), segs.end(),
              [](const Segment& x, const Segment& y) { return x.left < y.left; });
  }
  std::vector<Arc> arcs;
  arcs.reserve(segs.size());
  for (Segment& s : segs) arcs.push_back({std::move(s.left), std::move(s.right)});
  return detail_make_canonical(std::move(arcs));
}

}  // namespace

TorusIntervalUnion detail_make_canonical(std::vector<Arc> arcs) {
  TorusIntervalUnion u;
  u.arcs_ = std::move(arcs);
  return u;
}

TorusIntervalUnion TorusIntervalUnion::from_arcs(std::vector<Arc> arcs) {
  std::vector<Arc> kept;
  kept.reserve(arcs.size());
  for (Arc& a : arcs) {
    Rat len = a.right - a.left;
    if (len <= 0) continue;  // empty open interval
    if (len > 1) throw std::invalid_argument("arc longer than the torus");
    // normalize left into [0,1)
    if (a.left < 0 || a.left >= 1) {
      Rat shift(floor_rat(a.left));
      a.left -= shift;
      a.right -= shift;
    }
    kept.push_back(std::move(a));
  }

  // fast path: sorted, interior-disjoint, unwrapped, nothing at the seam
  bool simple = !kept.empty() && kept.front().left > 0;
  for (size_t i = 0; simple && i < kept.size(); ++i) {
    if (kept[i].right > 1 ||
        (i + 1 < kept.size() && kept[i + 1].left < kept[i].right))
      simple = false;
  }
  if (simple && kept.back().right < 1) return detail_make_canonical(std::move(kept));
  if (kept.empty()) return TorusIntervalUnion();

  return canonical_from_segments(merge_overlaps(unwrap(kept)));
}

Rat TorusIntervalUnion::measure() const {
  Rat total(0);
  for (const Arc& a : arcs_) total += a.right - a.left;
  return total;
}

namespace {

TorusIntervalUnion approx_set_impl(uint32_t q, const PsiFunction& psi,
                                   const Factorization& fq) {
  const Rat& v = psi.at(q);
  if (v == 0) return TorusIntervalUnion();
  Rat radius = v / Rat(Int(q));
  if (q == 1) {
    // single reduced fraction 1/1 == 0: one arc through the seam
    return TorusIntervalUnion::from_arcs({{Rat(1) - radius, Rat(1) + radius}});
  }
  std::vector<uint64_t> primes;
  primes.reserve(fq.size());
  for (const auto& [p, e] : fq) primes.push_back(p);

  // left = (p rd - q rn) / (q rd), right = (p rd + q rn) / (q rd)
  const Int& rn = radius.get_num();
  const Int& rd = radius.get_den();
  Int qrd = Int(q) * rd;
  Int offset = Int(q) * rn;

  std::vector<Arc> arcs;
  for (uint64_t p = 1; p < q; ++p) {
    bool coprime = true;
    for (uint64_t pr : primes)
      if (p % pr == 0) {
        coprime = false;
        break;
      }
    if (!coprime) continue;
    Int base = Int(static_cast<unsigned long>(p)) * rd;
    arcs.push_back({make_rat(base - offset, qrd), make_rat(base + offset, qrd)});
  }
  return TorusIntervalUnion::from_arcs(std::move(arcs));
}

}  // namespace

TorusIntervalUnion approx_set(uint32_t q, const PsiFunction& psi) {
  if (q < 1 || q > psi.limit()) throw std::out_of_range("approx_set: q outside psi table");
  return approx_set_impl(q, psi, factorize_trial(q));
}

TorusIntervalUnion approx_set(uint32_t q, const PsiFunction& psi, const Sieve& sieve) {
  if (q < 1 || q > psi.limit()) throw std::out_of_range("approx_set: q outside psi table");
  return approx_set_impl(q, psi, sieve.factorize(q));
}

TorusIntervalUnion intersect(const TorusIntervalUnion& a, const TorusIntervalUnion& b) {
  std::vector<Segment> sa = unwrap(a.arcs());
  std::vector<Segment> sb = unwrap(b.arcs());
  std::vector<Segment> out;
  size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const Rat& lo = std::max(sa[i].left, sb[j].left);
    const Rat& hi = std::min(sa[i].right, sb[j].right);
    if (lo < hi) out.push_back({lo, hi});
    if (sa[i].right <= sb[j].right)
      ++i;
    else
      ++j;
  }
  return canonical_from_segments(std::move(out));
}

Rat overlap_exact(uint32_t q, uint32_t r, const PsiFunction& psi) {
  return intersect(approx_set(q, psi), approx_set(r, psi)).measure();
}

Rat overlap_exact(uint32_t q, uint32_t r, const PsiFunction& psi, const Sieve& sieve) {
  return intersect(approx_set(q, psi, sieve), approx_set(r, psi, sieve)).measure();
}

OverlapProfile overlap_profile(uint32_t q, uint32_t r, const PsiFunction& psi) {
  Rat dq = psi.at(q) / Rat(Int(q));
  Rat dr = psi.at(r) / Rat(Int(r));
  OverlapProfile p;
  p.small_delta = std::min(dq, dr);
  p.big_delta = std::max(dq, dr);
  p.split = lmn_split(q, r);
  return p;
}

Rat w_function(const Rat& y, const OverlapProfile& profile) {
  if (y < 0) throw std::invalid_argument("w_function: y must be >= 0");
  const Rat& d = profile.small_delta;
  const Rat& D = profile.big_delta;
  if (y <= D - d) return 2 * d;
  if (y <= D + d) return D + d - y;
  return Rat(0);
}

Rat overlap_crt(uint32_t q, uint32_t r, const PsiFunction& psi) {
  if (q == r) throw std::invalid_argument("overlap_crt: stated for q != r only");
  OverlapProfile prof = overlap_profile(q, r, psi);
  const uint64_t l = prof.split.l, n = prof.split.n, m = prof.split.m;
  const uint64_t ln = l * n;

  if (prof.big_delta == 0) return Rat(0);  // both psi values zero

  Factorization fm = factorize_trial(m), fl = factorize_trial(l);
  Rat phi_m(Int(totient_of(fm, m)));

  std::vector<uint64_t> l_primes;
  for (const auto& [p, e] : fl) l_primes.push_back(p);

  // w vanishes beyond Delta+delta, so only c <= ln (Delta+delta) contribute.
  Rat cutoff = Rat(Int(ln)) * (prof.big_delta + prof.small_delta);
  Int cmax_z = floor_rat(cutoff);
  uint64_t cmax = ln;
  if (cmax_z < Int(static_cast<unsigned long>(ln))) cmax = cmax_z.get_ui();

  Rat total(0);
  for (uint64_t c = 1; c <= cmax; ++c) {
    if (gcd_u64(c, n) != 1) continue;
    Rat wc = w_function(make_rat(Int(static_cast<unsigned long>(c)), Int(static_cast<unsigned long>(ln))), prof);
    if (wc == 0) continue;
    Rat term = 2 * wc * phi_m * Rat(Int(static_cast<unsigned long>(l)));
    for (uint64_t p : l_primes) {
      if (c % p == 0)
        term *= make_rat(Int(static_cast<unsigned long>(p - 1)), Int(static_cast<unsigned long>(p)));
      else
        term *= make_rat(Int(static_cast<unsigned long>(p)) - 2, Int(static_cast<unsigned long>(p)));
    }
    total += term;
  }
  return total;
}

Rat psi_mass(uint32_t Q, const PsiFunction& psi) {
  return psi_mass(Q, psi, totient_table(Q));
}

Rat psi_mass(uint32_t Q, const PsiFunction& psi, const std::vector<uint64_t>& phi) {
  if (Q > psi.limit()) throw std::out_of_range("psi_mass: Q outside psi table");
  Rat total(0);
  for (uint32_t q = 1; q <= Q; ++q) {
    if (psi.at(q) == 0) continue;
    total += make_rat(Int(2 * phi[q]), Int(static_cast<unsigned long>(q))) * psi.at(q);
  }
  return total;
}

}  // namespace redfrac
