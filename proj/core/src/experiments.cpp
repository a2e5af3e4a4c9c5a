#include "redfrac/experiments.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "redfrac/parallel.hpp"

namespace redfrac {

namespace {

using certified::EncFn;
using certified::Enclosure;

// One certified threshold compared against many rationals: keeps the current
// enclosure and refines only when a query lands inside it.
class CachedThreshold {
 public:
  explicit CachedThreshold(EncFn fn, int prec = 128)
      : fn_(std::move(fn)), prec_(prec), cur_(fn_(prec_)) {}

  // sign of (threshold - v)
  int cmp(const Rat& v) {
    for (;;) {
      if (cur_.hi < v) return -1;
      if (cur_.lo > v) return 1;
      if (cur_.is_point()) return 0;
      if (prec_ >= (1 << 15))
        throw std::runtime_error("certified threshold comparison undecided");
      prec_ *= 2;
      cur_ = fn_(prec_);
    }
  }

  const Enclosure& enclosure() const { return cur_; }

 private:
  EncFn fn_;
  int prec_;
  Enclosure cur_;
};

Rat weight_mu(uint32_t q, const PsiFunction& psi, const std::vector<uint64_t>& phi) {
  // phi(q) psi(q) / q
  return make_rat(Int(phi[q]), Int(static_cast<unsigned long>(q))) * psi.at(q);
}

// L_s with the prime cutoff decided through a certified threshold.
Rat l_sum_certified(const std::vector<uint64_t>& primes, CachedThreshold& cutoff) {
  Rat total(0);
  for (uint64_t p : primes)
    if (cutoff.cmp(Rat(Int(static_cast<unsigned long>(p)))) <= 0)
      total += make_rat(Int(1), Int(static_cast<unsigned long>(p)));
  return total;
}

}  // namespace

uint64_t count_solutions(uint32_t Q, const Rat& alpha, const PsiFunction& psi,
                         const Sieve& sieve) {
  if (Q < 1 || Q > psi.limit())
    throw std::out_of_range("count_solutions: Q outside psi table");
  if (alpha < 0 || alpha >= 1)
    throw std::invalid_argument("count_solutions: alpha must lie in [0,1)");

  uint64_t count = 0;
  for (uint32_t q = 1; q <= Q; ++q) {
    const Rat& v = psi.at(q);
    if (v == 0) continue;
    Rat radius = v / Rat(Int(static_cast<unsigned long>(q)));
    Rat aq = alpha * Rat(Int(static_cast<unsigned long>(q)));
    Int lo = floor_rat(aq);
    Int hi = ceil_rat(aq);
    Factorization fq = sieve.factorize(q);

    auto try_candidate = [&](const Int& c) -> bool {
      // center c/q; distance |alpha - c/q| is the torus distance because the
      // two rounded candidates bracket alpha within 1/q
      Rat dist = abs(aq - Rat(c)) / Rat(Int(static_cast<unsigned long>(q)));
      if (dist >= radius) return false;
      // reduced-fraction condition for the wrapped numerator in [1, q]
      for (const auto& [p, e] : fq) {
        Int rem = c % Int(static_cast<unsigned long>(p));
        if (rem == 0) return false;
      }
      return true;
    };

    if (q == 1) {
      // single center at the integers; coprime by convention (p = q = 1)
      Rat dist = abs(aq - Rat(lo));
      Rat dist2 = abs(Rat(hi) - aq);
      if (std::min(dist, dist2) < radius) ++count;
      continue;
    }
    if (try_candidate(lo))
      ++count;
    else if (hi != lo && try_candidate(hi))
      ++count;
  }
  return count;
}

const char* to_string(PairClassLabel label) {
  switch (label) {
    case PairClassLabel::E1: return "E1";
    case PairClassLabel::E2: return "E2";
    case PairClassLabel::E3: return "E3";
    case PairClassLabel::E4: return "E4";
    case PairClassLabel::E5: return "E5";
  }
  return "?";
}

namespace {

PairClass classify_with_context(uint32_t q, uint32_t r, const Rat& C,
                                const PsiFunction& psi, const Rat& psi_q_mass,
                                const Sieve& sieve) {
  if (psi_q_mass < 2)
    throw std::invalid_argument("classify_pair: requires Psi(Q) >= 2");

  PairClass pc{};
  pc.d_value = big_d(q, r, psi);

  EncFn log_psi = [m = psi_q_mass](int prec) {
    return certified::enc_log(certified::enc_point(m), prec);
  };
  EncFn d_cutoff_fn = [m = psi_q_mass, C, log_psi](int prec) {
    return certified::enc_point(m) /
           certified::enc_pow(log_psi(prec), C, prec);
  };
  EncFn l_cutoff_fn = [C, log_psi](int prec) {
    return certified::enc_pow(log_psi(prec), -C, prec);
  };
  pc.d_cutoff = d_cutoff_fn(128);
  pc.l_cutoff = l_cutoff_fn(128);

  if (q == r) {
    pc.label = PairClassLabel::E1;
    return pc;
  }

  std::vector<uint64_t> primes = ratio_primes(sieve.factorize(q), sieve.factorize(r));
  CachedThreshold d_cutoff(d_cutoff_fn);
  if (d_cutoff.cmp(pc.d_value) >= 0) {
    // D below the cutoff: split on L at the F(Psi) tail
    CachedThreshold f_at_psi(f_threshold_fn(C, psi_q_mass));
    pc.l_at_f_psi = l_sum_certified(primes, f_at_psi);
    pc.label = pc.l_at_f_psi <= 1 ? PairClassLabel::E2 : PairClassLabel::E3;
  } else {
    CachedThreshold f_at_d(f_threshold_fn(C, pc.d_value));
    pc.l_at_f_d = l_sum_certified(primes, f_at_d);
    CachedThreshold l_cutoff(l_cutoff_fn);
    pc.label = l_cutoff.cmp(pc.l_at_f_d) >= 0 ? PairClassLabel::E4 : PairClassLabel::E5;
  }
  return pc;
}

}  // namespace

PairClass classify_pair(uint32_t q, uint32_t r, uint32_t Q, const Rat& C,
                        const PsiFunction& psi, const Sieve& sieve) {
  if (q < 1 || r < 1 || q > Q || r > Q)
    throw std::out_of_range("classify_pair: pair outside [1,Q]^2");
  if (Q > psi.limit()) throw std::out_of_range("classify_pair: Q outside psi table");
  std::vector<uint64_t> phi = totient_table(Q);
  return classify_with_context(q, r, C, psi, psi_mass(Q, psi, phi), sieve);
}

MomentReport second_moment(uint32_t Q, const PsiFunction& psi, const Sieve& sieve) {
  if (Q < 1 || Q > psi.limit())
    throw std::out_of_range("second_moment: Q outside psi table");

  struct Event {
    Rat pos;
    int delta;
  };
  std::vector<Event> events;
  for (uint32_t q = 1; q <= Q; ++q) {
    TorusIntervalUnion u = approx_set(q, psi, sieve);
    for (const Arc& a : u.arcs()) {
      if (a.right > 1) {
        events.push_back({a.left, +1});
        events.push_back({Rat(1), -1});
        events.push_back({Rat(0), +1});
        events.push_back({a.right - 1, -1});
      } else {
        events.push_back({a.left, +1});
        events.push_back({a.right, -1});
      }
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.pos < b.pos; });

  // fixed-denominator integer accumulation: all endpoints scale exactly to L
  Int L(1);
  for (const Event& e : events)
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), e.pos.get_den_mpz_t());

  auto scaled = [&L](const Rat& pos) {
    Int factor;
    mpz_divexact(factor.get_mpz_t(), L.get_mpz_t(), pos.get_den_mpz_t());
    return Int(pos.get_num() * factor);
  };

  Int acc(0);
  Int cur_scaled(0);
  long depth = 0;
  size_t i = 0;
  while (i < events.size()) {
    Int next_scaled = scaled(events[i].pos);
    if (depth != 0) {
      Int seg = next_scaled - cur_scaled;
      acc += seg * static_cast<unsigned long>(depth) * static_cast<unsigned long>(depth);
    }
    // apply every delta at this position
    size_t j = i;
    while (j < events.size() && events[j].pos == events[i].pos) {
      depth += events[j].delta;
      ++j;
    }
    cur_scaled = std::move(next_scaled);
    i = j;
  }
  if (depth != 0) throw std::logic_error("second_moment: unbalanced sweep");

  MomentReport rep;
  rep.Q = Q;
  rep.psi_mass_value = psi_mass(Q, psi, totient_table(Q));
  rep.sum_overlaps = make_rat(acc, L);
  rep.ratio = rep.psi_mass_value == 0
                  ? Rat(0)
                  : rep.sum_overlaps / (rep.psi_mass_value * rep.psi_mass_value);
  return rep;
}

MomentReport second_moment_with_classes(uint32_t Q, const Rat& C,
                                        const PsiFunction& psi, const Sieve& sieve) {
  if (Q < 1 || Q > psi.limit())
    throw std::out_of_range("second_moment: Q outside psi table");
  std::vector<uint64_t> phi = totient_table(Q);
  Rat mass = psi_mass(Q, psi, phi);

  std::vector<TorusIntervalUnion> sets(Q + 1);
  for (uint32_t q = 1; q <= Q; ++q) sets[q] = approx_set(q, psi, sieve);

  std::array<Rat, 5> subtotals{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
  Rat total(0);
  for (uint32_t q = 1; q <= Q; ++q) {
    for (uint32_t r = 1; r <= Q; ++r) {
      Rat ov = q == r ? sets[q].measure() : intersect(sets[q], sets[r]).measure();
      total += ov;
      PairClass pc = classify_with_context(q, r, C, psi, mass, sieve);
      subtotals[static_cast<size_t>(pc.label)] += ov;
    }
  }

  MomentReport rep;
  rep.Q = Q;
  rep.psi_mass_value = mass;
  rep.sum_overlaps = total;
  rep.ratio = mass == 0 ? Rat(0) : total / (mass * mass);
  rep.class_subtotals = subtotals;
  return rep;
}

PropReport proposition_sum_1(uint32_t Q, const Rat& t, const PsiFunction& psi) {
  if (t < 1) throw std::invalid_argument("proposition_sum_1: t must be >= 1");
  if (Q < 1 || Q > psi.limit())
    throw std::out_of_range("proposition_sum_1: Q outside psi table");
  std::vector<uint64_t> phi = totient_table(Q);
  Rat mass = psi_mass(Q, psi, phi);
  Rat cutoff = mass / t;

  Rat sum(0);
  for (uint32_t q = 1; q <= Q; ++q) {
    if (psi.at(q) == 0) continue;
    Rat mq = weight_mu(q, psi, phi);
    for (uint32_t r = 1; r <= Q; ++r) {
      if (psi.at(r) == 0) continue;
      if (big_d(q, r, psi) <= cutoff) sum += mq * weight_mu(r, psi, phi);
    }
  }

  EncFn ref_fn = [mass, t](int prec) {
    return certified::enc_point(mass * mass) /
           certified::enc_pow(certified::enc_point(t), make_rat(1, 5), prec);
  };
  PropReport rep;
  rep.sum = sum;
  if (mass == 0) {
    rep.reference = certified::enc_point(Rat(0));
    rep.ratio = certified::enc_point(Rat(0));
    return rep;
  }
  rep.reference = certified::refine_relative(ref_fn, 30);
  rep.ratio = certified::enc_point(rep.sum) / rep.reference;
  return rep;
}

PropReport proposition_sum_2(uint32_t Q, const Rat& t, const Rat& C,
                             const PsiFunction& psi, const Sieve& sieve) {
  if (t < 1 || C < 1)
    throw std::invalid_argument("proposition_sum_2: requires t, C >= 1");
  if (Q < 1 || Q > psi.limit())
    throw std::out_of_range("proposition_sum_2: Q outside psi table");
  std::vector<uint64_t> phi = totient_table(Q);
  Rat mass = psi_mass(Q, psi, phi);
  Rat d_cutoff = t * mass;

  CachedThreshold f_of_t(f_threshold_fn(C, t));
  CachedThreshold l_threshold([C, t](int prec) {
    return certified::enc_pow(f_threshold_enclosure(C, t, prec), make_rat(-1, 4), prec);
  });

  std::vector<Factorization> fact(Q + 1);
  for (uint32_t n = 1; n <= Q; ++n) fact[n] = sieve.factorize(n);

  Rat sum(0);
  for (uint32_t q = 1; q <= Q; ++q) {
    if (psi.at(q) == 0) continue;
    Rat mq = weight_mu(q, psi, phi);
    for (uint32_t r = 1; r <= Q; ++r) {
      if (psi.at(r) == 0) continue;
      if (big_d(q, r, psi) > d_cutoff) continue;
      Rat l = l_sum_certified(ratio_primes(fact[q], fact[r]), f_of_t);
      if (l_threshold.cmp(l) <= 0) sum += mq * weight_mu(r, psi, phi);
    }
  }

  EncFn ref_fn = [mass, C, t](int prec) {
    return certified::enc_point(mass * mass) /
           certified::enc_pow(f_threshold_enclosure(C, t, prec), make_rat(1, 2), prec);
  };
  PropReport rep;
  rep.sum = sum;
  if (mass == 0) {
    rep.reference = certified::enc_point(Rat(0));
    rep.ratio = certified::enc_point(Rat(0));
    return rep;
  }
  rep.reference = certified::refine_relative(ref_fn, 30);
  rep.ratio = certified::enc_point(rep.sum) / rep.reference;
  return rep;
}

uint32_t subsequence_qk(uint32_t k, const Rat& C, const PsiFunction& psi) {
  if (k < 1) throw std::invalid_argument("subsequence_qk: k must be >= 1");
  if (C <= 4) throw std::invalid_argument("subsequence_qk: requires C > 4");

  // e^{k^{1/sqrt(C)}} = exp(exp(log(k)/sqrt(C)))
  EncFn threshold = [k, C](int prec) {
    using namespace certified;
    Enclosure logk = enc_log(enc_point(Rat(Int(static_cast<unsigned long>(k)))), prec);
    Enclosure root = enc_pow(enc_point(C), make_rat(1, 2), prec);
    return enc_exp(enc_exp(logk / root, prec), prec);
  };
  CachedThreshold cached(threshold);

  std::vector<uint64_t> phi = totient_table(psi.limit());
  Rat running(0);
  for (uint32_t q = 1; q <= psi.limit(); ++q) {
    running += make_rat(Int(2 * phi[q]), Int(static_cast<unsigned long>(q))) * psi.at(q);
    if (cached.cmp(running) <= 0) return q;
  }
  throw std::invalid_argument("subsequence_qk: threshold unreachable within the psi table");
}

MonteCarloReport monte_carlo_theorem1(uint32_t Q, const PsiFunction& psi,
                                      const Sieve& sieve, uint32_t samples,
                                      uint64_t seed, unsigned threads) {
  MonteCarloReport rep;
  rep.Q = Q;
  rep.psi_mass_value = psi_mass(Q, psi, totient_table(Q));
  if (rep.psi_mass_value < 2)
    throw std::invalid_argument("monte_carlo_theorem1: requires Psi(Q) >= 2");
  rep.max_deviation = Rat(0);
  if (samples == 0) return rep;

  std::mt19937_64 rng(seed);
  rep.samples.resize(samples);
  for (uint32_t i = 0; i < samples; ++i) rep.samples[i].bits = rng();

  const Int two64 = Int(1) << 64;
  parallel_for(samples, threads, [&](size_t i) {
    MonteCarloSample& s = rep.samples[i];
    Rat alpha = make_rat(Int(s.bits), two64);
    s.count = count_solutions(Q, alpha, psi, sieve);
    s.deviation = abs(Rat(Int(s.count)) / rep.psi_mass_value - 1);
  });
  for (const MonteCarloSample& s : rep.samples)
    rep.max_deviation = std::max(rep.max_deviation, s.deviation);
  return rep;
}

}  // namespace redfrac
