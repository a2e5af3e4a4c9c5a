// Command-line front end: psi ingestion and generators, experiment drivers,
// report emission. One experiment per invocation; exit status 0 iff every
// asserted invariant passed.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "redfrac/anatomy.hpp"
#include "redfrac/bounds.hpp"
#include "redfrac/errors.hpp"
#include "redfrac/experiments.hpp"
#include "redfrac/gcdgraph.hpp"
#include "redfrac/measure.hpp"
#include "redfrac/psi.hpp"

namespace rf = redfrac;

namespace {

struct Output {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    std::string full = path;
    const char* dir = std::getenv("REDFRAC_OUT_DIR");
    if (dir && *dir && path.front() != '/') full = std::string(dir) + "/" + path;
    file = std::make_unique<std::ofstream>(full);
    if (!*file) throw std::runtime_error("cannot open output file: " + full);
    os = file.get();
  }
  std::ostream& out() { return *os; }
};

std::string enc_str(const rf::certified::Enclosure& e) { return e.str(); }

int run_measure(const std::string& psi_spec, uint32_t Q, uint32_t q_single,
                const std::string& format, Output& out) {
  uint32_t limit = q_single > 0 ? q_single : Q;
  rf::PsiFunction psi = rf::generate_psi(psi_spec, limit);
  rf::Sieve sieve(limit);
  auto phi = rf::totient_table(limit);
  uint32_t from = q_single > 0 ? q_single : 1;

  bool csv = format == "csv";
  if (csv) out.out() << "q,phi,psi,lambda\n";
  bool all_ok = true;
  for (uint32_t q = from; q <= limit; ++q) {
    rf::TorusIntervalUnion u = rf::approx_set(q, psi, sieve);
    rf::Rat lam = u.measure();
    rf::Rat expected =
        rf::make_rat(rf::Int(2 * phi[q]), rf::Int(static_cast<unsigned long>(q))) * psi.at(q);
    bool ok = lam == expected;
    all_ok = all_ok && ok;
    if (csv)
      out.out() << q << "," << phi[q] << "," << rf::rat_str(psi.at(q)) << ","
                << rf::rat_str(lam) << "\n";
    else
      out.out() << "q=" << q << " phi=" << phi[q] << " psi=" << rf::rat_str(psi.at(q))
                << " arcs=" << u.arcs().size() << " lambda=" << rf::rat_str(lam)
                << " identity=" << (ok ? "ok" : "VIOLATED") << "\n";
  }
  if (!csv)
    out.out() << "psi_mass=" << rf::rat_str(rf::psi_mass(limit, psi, phi)) << "\n";
  return all_ok ? 0 : 1;
}

int run_overlap(const std::string& psi_spec, uint32_t q, uint32_t r, Output& out) {
  uint32_t limit = std::max(q, r);
  rf::PsiFunction psi = rf::generate_psi(psi_spec, limit);
  rf::Rat exact = rf::overlap_exact(q, r, psi);
  out.out() << "q=" << q << " r=" << r << " d=" << rf::rat_str(rf::big_d(q, r, psi))
            << " overlap_exact=" << rf::rat_str(exact);
  if (q != r) {
    rf::Rat crt = rf::overlap_crt(q, r, psi);
    bool agree = crt == exact;
    out.out() << " overlap_crt=" << rf::rat_str(crt)
              << " agree=" << (agree ? "yes" : "NO") << "\n";
    return agree ? 0 : 1;
  }
  out.out() << " overlap_crt=skipped\n";
  return 0;
}

int run_bounds(const std::string& psi_spec, uint32_t Q, uint32_t q, uint32_t r,
               const std::string& u_s, const std::string& T_s, const std::string& C_s,
               const std::string& format, Output& out) {
  rf::Rat u = rf::parse_rat(u_s), T = rf::parse_rat(T_s);
  if (q > 0 && r > 0) {
    uint32_t limit = std::max(q, r);
    rf::PsiFunction psi = rf::generate_psi(psi_spec, limit);
    out.out() << "pv_factor=" << rf::rat_str(rf::pv_factor(q, r, psi)) << "\n";
    rf::BoundReport rep = rf::km_bound_parts(q, r, psi, u, T);
    out.out() << "q=" << q << " r=" << r << " d=" << rf::rat_str(rep.d_value)
              << " overlap=" << rf::rat_str(rep.exact_overlap)
              << " product=" << rf::rat_str(rep.product_term)
              << " euler=" << rf::rat_str(rep.euler_factor)
              << " error=" << (rep.error_term ? enc_str(*rep.error_term) : "unbounded")
              << " ratio=" << (rep.ratio ? enc_str(*rep.ratio) : "undefined") << "\n";
    if (!C_s.empty()) {
      rf::BoundReport sp = rf::km_bound_specialized(q, r, psi, rf::parse_rat(C_s));
      out.out() << "specialized C=" << C_s << " euler=" << rf::rat_str(sp.euler_factor)
                << " error=" << enc_str(*sp.error_term)
                << " ratio=" << (sp.ratio ? enc_str(*sp.ratio) : "undefined") << "\n";
    }
    return 0;
  }

  // corpus scan: sup of overlap/pv and overlap/(product euler (1+error))
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  bool csv = format == "csv";
  if (csv) out.out() << "q,r,overlap,pv_factor,ratio_pv\n";
  rf::Rat sup_pv(0);
  rf::Rat sup_refined_hi(0);
  for (uint32_t a = 1; a <= Q; ++a) {
    for (uint32_t b = a + 1; b <= Q; ++b) {
      rf::Rat pv = rf::pv_factor(a, b, psi);
      rf::BoundReport rep = rf::km_bound_parts(a, b, psi, u, T);
      if (pv > 0) {
        rf::Rat ratio = rep.exact_overlap / pv;
        if (ratio > sup_pv) sup_pv = ratio;
        if (csv)
          out.out() << a << "," << b << "," << rf::rat_str(rep.exact_overlap) << ","
                    << rf::rat_str(pv) << "," << rf::rat_str(ratio) << "\n";
      }
      if (rep.product_term > 0 && rep.error_term) {
        rf::certified::Enclosure denom =
            (*rep.error_term + rf::Rat(1)) * (rep.product_term * rep.euler_factor);
        rf::Rat hi = rep.exact_overlap / denom.lo;
        if (hi > sup_refined_hi) sup_refined_hi = hi;
      }
    }
  }
  const char* prefix = csv ? "# " : "";
  out.out() << prefix << "sup_overlap_over_pv=" << rf::rat_str(sup_pv) << "\n"
            << prefix << "sup_overlap_over_refined<=" << rf::rat_str(sup_refined_hi) << "\n";
  return 0;
}

int run_second_moment(const std::string& psi_spec, uint32_t Q, bool classes,
                      const std::string& C_s, Output& out) {
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  rf::Sieve sieve(Q);
  rf::MomentReport rep =
      classes ? rf::second_moment_with_classes(Q, rf::parse_rat(C_s), psi, sieve)
              : rf::second_moment(Q, psi, sieve);
  out.out() << "Q=" << rep.Q << " psi_mass=" << rf::rat_str(rep.psi_mass_value)
            << " sum_overlaps=" << rf::rat_str(rep.sum_overlaps)
            << " ratio=" << rf::rat_str(rep.ratio) << "\n";
  if (rep.class_subtotals) {
    const char* names[5] = {"E1", "E2", "E3", "E4", "E5"};
    for (size_t i = 0; i < 5; ++i)
      out.out() << "class=" << names[i] << " subtotal="
                << rf::rat_str((*rep.class_subtotals)[i]) << "\n";
  }
  return 0;
}

int run_classify(const std::string& psi_spec, uint32_t Q, uint32_t q, uint32_t r,
                 const std::string& C_s, bool all, const std::string& format,
                 Output& out) {
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  rf::Sieve sieve(Q);
  rf::Rat C = rf::parse_rat(C_s);
  if (all) {
    bool csv = format == "csv";
    if (csv) out.out() << "q,r,class,d\n";
    for (uint32_t a = 1; a <= Q; ++a)
      for (uint32_t b = 1; b <= Q; ++b) {
        rf::PairClass pc = rf::classify_pair(a, b, Q, C, psi, sieve);
        if (csv)
          out.out() << a << "," << b << "," << rf::to_string(pc.label) << ","
                    << rf::rat_str(pc.d_value) << "\n";
        else
          out.out() << "q=" << a << " r=" << b << " class=" << rf::to_string(pc.label)
                    << " d=" << rf::rat_str(pc.d_value) << "\n";
      }
    return 0;
  }
  rf::PairClass pc = rf::classify_pair(q, r, Q, C, psi, sieve);
  out.out() << "q=" << q << " r=" << r << " class=" << rf::to_string(pc.label)
            << " d=" << rf::rat_str(pc.d_value) << " d_cutoff=" << enc_str(pc.d_cutoff)
            << " l_cutoff=" << enc_str(pc.l_cutoff)
            << " l_at_f_psi=" << rf::rat_str(pc.l_at_f_psi)
            << " l_at_f_d=" << rf::rat_str(pc.l_at_f_d) << "\n";
  return 0;
}

int run_props(const std::string& psi_spec, int which, uint32_t Q, const std::string& t_s,
              const std::string& C_s, Output& out) {
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  rf::Sieve sieve(Q);
  rf::Rat t = rf::parse_rat(t_s);
  rf::PropReport rep = which == 1
                           ? rf::proposition_sum_1(Q, t, psi)
                           : rf::proposition_sum_2(Q, t, rf::parse_rat(C_s), psi, sieve);
  out.out() << "which=" << which << " Q=" << Q << " t=" << t_s
            << " sum=" << rf::rat_str(rep.sum) << " reference=" << enc_str(rep.reference)
            << " ratio=" << enc_str(rep.ratio) << "\n";
  return 0;
}

int run_count(const std::string& psi_spec, uint32_t Q, const std::string& alpha_s,
              Output& out) {
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  rf::Sieve sieve(Q);
  uint64_t s = rf::count_solutions(Q, rf::parse_rat(alpha_s), psi, sieve);
  out.out() << "Q=" << Q << " alpha=" << alpha_s << " S=" << s << "\n";
  return 0;
}

int run_montecarlo(const std::string& psi_spec, uint32_t Q, uint32_t samples,
                   uint64_t seed, unsigned threads, const std::string& format,
                   Output& out) {
  rf::PsiFunction psi = rf::generate_psi(psi_spec, Q);
  rf::Sieve sieve(Q);
  rf::MonteCarloReport rep = rf::monte_carlo_theorem1(Q, psi, sieve, samples, seed, threads);
  bool csv = format == "csv";
  if (csv) out.out() << "bits,count,deviation\n";
  for (const auto& s : rep.samples) {
    if (csv)
      out.out() << s.bits << "," << s.count << ","
                << rf::rat_decimal(s.deviation, 12, true) << "\n";
    else
      out.out() << "bits=" << s.bits << " count=" << s.count
                << " deviation=" << rf::rat_str(s.deviation) << "\n";
  }
  if (csv)
    out.out() << "# Q=" << rep.Q << " psi_mass=" << rf::rat_decimal(rep.psi_mass_value, 6, false)
              << " max_deviation=" << rf::rat_decimal(rep.max_deviation, 12, true) << "\n";
  else
    out.out() << "Q=" << rep.Q << " psi_mass=" << rf::rat_str(rep.psi_mass_value)
              << " max_deviation=" << rf::rat_str(rep.max_deviation) << "\n";
  return 0;
}

int run_gcdgraph(const std::string& input, const std::string& op, uint64_t p, uint32_t k,
                 uint32_t l, const std::string& C_s, const std::string& t_s,
                 const std::string& s_s, int variant, const std::string& output,
                 Output& out) {
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open graph file: " + input);
  rf::GcdGraph g = rf::read_gcdgraph(in);

  auto emit_graph = [&output](const rf::GcdGraph& h) {
    if (output.empty()) return;
    std::ofstream f(output);
    if (!f) throw std::runtime_error("cannot open graph output: " + output);
    rf::write_gcdgraph(f, h);
  };
  auto print_quality = [&out](const rf::Quality& q) {
    out.out() << "quality_exact=" << rf::rat_str(q.exact)
              << " quality=" << q.enclose(128).str() << "\n";
  };
  auto print_trace = [&out](const rf::StepTrace& tr) {
    out.out() << "step p=" << tr.p << " k=" << tr.k << " l=" << tr.l
              << " delta_before=" << rf::rat_str(tr.delta_before)
              << " delta_after=" << rf::rat_str(tr.delta_after)
              << " delta_ratio=" << rf::rat_str(tr.delta_ratio) << "\n";
  };

  if (op == "validate") {
    auto violations = rf::validate(g);
    for (const auto& v : violations) out.out() << "violation=" << v << "\n";
    out.out() << "valid=" << (violations.empty() ? "yes" : "no") << "\n";
    return violations.empty() ? 0 : 1;
  }
  if (op == "density") {
    out.out() << "delta=" << rf::rat_str(rf::edge_density(g)) << "\n";
    return 0;
  }
  if (op == "quality") {
    print_quality(rf::quality(g));
    return 0;
  }
  if (op == "remaining") {
    out.out() << "R=";
    for (uint64_t pr : rf::remaining_primes(g)) out.out() << " " << pr;
    out.out() << "\n";
    return 0;
  }
  if (op == "rmusic") {
    out.out() << "R_music=";
    for (uint64_t pr : rf::r_music(g)) out.out() << " " << pr;
    out.out() << "\n";
    return 0;
  }
  if (op == "specialize") {
    rf::GcdGraph h = rf::specialize(g, p, k, l);
    emit_graph(h);
    out.out() << "delta=" << rf::rat_str(rf::edge_density(h)) << "\n";
    print_quality(rf::quality(h));
    return 0;
  }
  if (op == "find-pair") {
    rf::PairChoice pc = rf::find_pair(g, p);
    out.out() << "k=" << pc.k << " l=" << pc.l
              << " edge_share=" << rf::rat_str(pc.edge_share)
              << " ratio_pow10=" << rf::rat_str(pc.ratio_pow10) << "\n";
    return 0;
  }
  if (op == "step") {
    auto [h, tr] = rf::refine_step(g, p);
    print_trace(tr);
    emit_graph(h);
    return 0;
  }
  if (op == "prune") {
    rf::PruneReport rep = rf::prune_excess_edges(g, rf::parse_rat(s_s));
    out.out() << "removed_mass=" << rf::rat_str(rep.removed_mass)
              << " weighted_excess=" << rf::rat_str(rep.weighted_excess)
              << " retention_checked=" << (rep.retention_bound_checked ? "yes" : "no")
              << "\n";
    emit_graph(rep.graph);
    return 0;
  }
  if (op == "regularize") {
    rf::GcdGraph h = rf::regularize_neighborhoods(g);
    emit_graph(h);
    out.out() << "delta=" << rf::rat_str(rf::edge_density(h)) << "\n";
    print_quality(rf::quality(h));
    return 0;
  }
  if (op == "iterate") {
    auto [h, rep] = rf::iterate_quality_density(g, rf::parse_rat(C_s), rf::parse_rat(t_s));
    for (const auto& tr : rep.steps) print_trace(tr);
    out.out() << "steps=" << rep.steps.size()
              << " delta_ratio=" << rf::rat_str(rep.delta_ratio)
              << " p_diff=" << rep.p_diff_size
              << " branch_a=" << (rep.branch_a ? "yes" : "no")
              << " branch_b=" << (rep.branch_b ? "yes" : "no") << "\n";
    emit_graph(h);
    return 0;
  }
  if (op == "greedy") {
    auto [h, rep] = rf::greedy_empty_r(g);
    for (const auto& tr : rep.steps) print_trace(tr);
    print_quality(rep.q_final);
    emit_graph(h);
    return 0;
  }
  if (op == "pipeline") {
    auto [h, rep] = rf::good_subgraph_pipeline(g, rf::parse_rat(C_s), rf::parse_rat(t_s), variant);
    out.out() << "variant=" << rep.variant << " pruned=" << (rep.pruned ? "yes" : "no")
              << "\n";
    print_quality(rep.q_final);
    emit_graph(h);
    return 0;
  }
  throw std::runtime_error("unknown gcd-graph op: " + op);
}

int run_anatomy(uint64_t x, const std::string& t_s, const std::string& c_s, Output& out) {
  rf::AnatomyReport rep = rf::anatomy_count(x, rf::parse_rat(t_s), rf::parse_rat(c_s));
  out.out() << "x=" << x << " t=" << t_s << " c=" << c_s << " count=" << rep.count
            << " majorant=" << rep.majorant.str() << " markov=ok\n";
  return 0;
}

int run_mean_value(uint64_t x, const std::string& primes_csv, Output& out) {
  std::vector<uint64_t> ps;
  std::stringstream ss(primes_csv);
  std::string item;
  while (std::getline(ss, item, ',')) ps.push_back(std::stoull(item));
  rf::PrimeSet P(ps, /*odd_only=*/true);
  rf::MeanValueReport rep = rf::mean_value_check(x, P);
  out.out() << "x=" << x << " sum=" << rf::rat_str(rep.sum)
            << " main=" << rf::rat_str(rep.main_term)
            << " residual=" << rf::rat_str(rep.residual) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic laboratory for reduced-fraction approximation sets"};
  app.require_subcommand(1);

  std::string psi_spec = "constant:1/2";
  std::string out_path, format = "records";
  uint32_t Q = 0, q = 0, r = 0, samples = 0, k_arg = 0, l_arg = 0;
  uint64_t x = 0, p_arg = 0, seed = 1;
  unsigned threads = 1;
  std::string u_s = "2", T_s = "4", C_s = "1", t_s = "1", s_s = "2", c_s = "1/2";
  std::string alpha_s = "0";
  std::string input, output, op, primes_csv = "3";
  bool classes = false, all = false;
  int which = 1, variant = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (default stdout)");
    cmd->add_option("--format", format, "records|csv");
    cmd->add_option("--threads", threads, "worker cap");
  };

  auto* c_measure = app.add_subcommand("measure", "A_q construction and measure identity");
  c_measure->add_option("--psi", psi_spec);
  c_measure->add_option("--Q", Q);
  c_measure->add_option("--q", q);
  add_common(c_measure);

  auto* c_overlap = app.add_subcommand("overlap", "lambda(A_q cap A_r), both routes");
  c_overlap->add_option("--psi", psi_spec);
  c_overlap->add_option("--q", q)->required();
  c_overlap->add_option("--r", r)->required();
  add_common(c_overlap);

  auto* c_bounds = app.add_subcommand("bounds", "overlap bound reports / corpus sups");
  c_bounds->add_option("--psi", psi_spec);
  c_bounds->add_option("--Q", Q);
  c_bounds->add_option("--q", q);
  c_bounds->add_option("--r", r);
  c_bounds->add_option("--u", u_s);
  c_bounds->add_option("--T", T_s);
  c_bounds->add_option("--C", C_s);
  add_common(c_bounds);

  auto* c_moment = app.add_subcommand("second-moment", "endpoint-sweep overlap double sum");
  c_moment->add_option("--psi", psi_spec);
  c_moment->add_option("--Q", Q)->required();
  c_moment->add_flag("--classes", classes);
  c_moment->add_option("--C", C_s);
  add_common(c_moment);

  auto* c_classify = app.add_subcommand("classify", "five-way pair partition");
  c_classify->add_option("--psi", psi_spec);
  c_classify->add_option("--Q", Q)->required();
  c_classify->add_option("--q", q);
  c_classify->add_option("--r", r);
  c_classify->add_option("--C", C_s);
  c_classify->add_flag("--all", all);
  add_common(c_classify);

  auto* c_props = app.add_subcommand("props", "restricted second-moment sums");
  c_props->add_option("--psi", psi_spec);
  c_props->add_option("--which", which);
  c_props->add_option("--Q", Q)->required();
  c_props->add_option("--t", t_s);
  c_props->add_option("--C", C_s);
  add_common(c_props);

  auto* c_count = app.add_subcommand("count", "S(Q, alpha) solution count");
  c_count->add_option("--psi", psi_spec);
  c_count->add_option("--Q", Q)->required();
  c_count->add_option("--alpha", alpha_s)->required();
  add_common(c_count);

  auto* c_mc = app.add_subcommand("montecarlo", "S(Q,alpha)/Psi(Q) deviation samples");
  c_mc->add_option("--psi", psi_spec);
  c_mc->add_option("--Q", Q)->required();
  c_mc->add_option("--samples", samples)->required();
  c_mc->add_option("--seed", seed);
  add_common(c_mc);

  auto* c_graph = app.add_subcommand("gcd-graph", "GCD graph operations");
  c_graph->add_option("--input", input)->required();
  c_graph->add_option("--op", op)->required();
  c_graph->add_option("--p", p_arg);
  c_graph->add_option("--k", k_arg);
  c_graph->add_option("--l", l_arg);
  c_graph->add_option("--C", C_s);
  c_graph->add_option("--t", t_s);
  c_graph->add_option("--s", s_s);
  c_graph->add_option("--variant", variant);
  c_graph->add_option("--output", output, "write the resulting graph here");
  add_common(c_graph);

  auto* c_anatomy = app.add_subcommand("anatomy", "small-prime-mass count vs majorant");
  c_anatomy->add_option("--x", x)->required();
  c_anatomy->add_option("--t", t_s)->required();
  c_anatomy->add_option("--c", c_s)->required();
  add_common(c_anatomy);

  auto* c_mean = app.add_subcommand("mean-value", "multiplicative mean value residual");
  c_mean->add_option("--x", x)->required();
  c_mean->add_option("--P", primes_csv, "comma-separated odd primes");
  add_common(c_mean);

  CLI11_PARSE(app, argc, argv);

  Output out;
  try {
    out.open(out_path);
    int rc = 1;
    if (c_measure->parsed()) {
      if (q == 0 && Q == 0) throw std::runtime_error("measure: need --q or --Q");
      rc = run_measure(psi_spec, Q, q, format, out);
    } else if (c_overlap->parsed()) {
      rc = run_overlap(psi_spec, q, r, out);
    } else if (c_bounds->parsed()) {
      if ((q == 0 || r == 0) && Q == 0)
        throw std::runtime_error("bounds: need --q/--r or --Q");
      rc = run_bounds(psi_spec, Q, q, r, u_s, T_s,
                      c_bounds->count("--C") ? C_s : std::string(), format, out);
    } else if (c_moment->parsed()) {
      rc = run_second_moment(psi_spec, Q, classes, C_s, out);
    } else if (c_classify->parsed()) {
      if (!all && (q == 0 || r == 0))
        throw std::runtime_error("classify: need --q/--r or --all");
      rc = run_classify(psi_spec, Q, q, r, C_s, all, format, out);
    } else if (c_props->parsed()) {
      rc = run_props(psi_spec, which, Q, t_s, C_s, out);
    } else if (c_count->parsed()) {
      rc = run_count(psi_spec, Q, alpha_s, out);
    } else if (c_mc->parsed()) {
      rc = run_montecarlo(psi_spec, Q, samples, seed, threads, format, out);
    } else if (c_graph->parsed()) {
      rc = run_gcdgraph(input, op, p_arg, k_arg, l_arg, C_s, t_s, s_s, variant, output, out);
    } else if (c_anatomy->parsed()) {
      rc = run_anatomy(x, t_s, c_s, out);
    } else if (c_mean->parsed()) {
      rc = run_mean_value(x, primes_csv, out);
    }
    out.out() << "status=" << (rc == 0 ? "ok" : "fail") << "\n";
    return rc;
  } catch (const rf::TheoremViolation& e) {
    out.out() << "status=fail kind=theorem-violation reason=" << e.what() << "\n";
    if (!e.artifact.empty()) {
      std::ofstream art("counterexample.gcdgraph");
      art << e.artifact;
      out.out() << "artifact=counterexample.gcdgraph\n";
    }
    return 2;
  } catch (const std::exception& e) {
    out.out() << "status=fail kind=error reason=" << e.what() << "\n";
    return 1;
  }
}
