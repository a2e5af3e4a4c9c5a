#include "redfrac/psi.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "redfrac/arith.hpp"

namespace redfrac {

namespace {

const Rat kHalf = make_rat(1, 2);

void check_range(const Rat& v, uint32_t q) {
  if (v < 0 || v > kHalf)
    throw std::invalid_argument("psi(" + std::to_string(q) + ") = " + rat_str(v) +
                                " outside [0, 1/2]");
}

}  // namespace

PsiFunction::PsiFunction(uint32_t limit, std::vector<Rat> values)
    : limit_(limit), values_(std::move(values)) {
  if (limit_ < 1) throw std::invalid_argument("PsiFunction: limit must be >= 1");
  if (values_.size() != static_cast<size_t>(limit_) + 1)
    throw std::invalid_argument("PsiFunction: table must hold exactly limit entries");
  for (uint32_t q = 1; q <= limit_; ++q) check_range(values_[q], q);
}

const Rat& PsiFunction::at(uint32_t q) const {
  if (q < 1 || q > limit_)
    throw std::out_of_range("PsiFunction::at: q=" + std::to_string(q) +
                            " outside table limit " + std::to_string(limit_));
  return values_[q];
}

PsiFunction read_psi(std::istream& in) {
  std::string head;
  long long limit = 0;
  if (!(in >> head >> limit) || head != "Q" || limit < 1)
    throw std::invalid_argument("psi file: expected header 'Q <integer>'");
  std::vector<Rat> values(static_cast<size_t>(limit) + 1, Rat(0));
  for (long long q = 1; q <= limit; ++q) {
    long long got = 0;
    std::string val;
    if (!(in >> got >> val))
      throw std::invalid_argument("psi file: missing entry for q=" + std::to_string(q));
    if (got != q)
      throw std::invalid_argument("psi file: expected q=" + std::to_string(q) +
                                  ", found " + std::to_string(got));
    values[static_cast<size_t>(q)] = parse_rat(val);
  }
  return PsiFunction(static_cast<uint32_t>(limit), std::move(values));
}

PsiFunction read_psi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open psi file: " + path);
  return read_psi(in);
}

void write_psi(std::ostream& out, const PsiFunction& psi) {
  out << "Q " << psi.limit() << "\n";
  for (uint32_t q = 1; q <= psi.limit(); ++q)
    out << q << " " << rat_str(psi.at(q)) << "\n";
}

PsiFunction generate_psi(const std::string& spec, uint32_t Q) {
  if (Q < 1) throw std::invalid_argument("generate_psi: Q must be >= 1");
  std::vector<Rat> values(static_cast<size_t>(Q) + 1, Rat(0));

  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (kind == "constant") {
    Rat v = parse_rat(rest);
    check_range(v, 1);
    for (uint32_t q = 1; q <= Q; ++q) values[q] = v;
  } else if (kind == "reciprocal-log") {
    if (!rest.empty()) throw std::invalid_argument("reciprocal-log takes no argument");
    for (uint32_t q = 1; q <= Q; ++q) {
      uint32_t bits = 0;  // ceil(log2(q+1))
      while ((uint64_t{1} << bits) < static_cast<uint64_t>(q) + 1) ++bits;
      Rat v = make_rat(1, static_cast<long>(bits));
      values[q] = v > kHalf ? kHalf : v;
    }
  } else if (kind == "prime-support") {
    Rat v = parse_rat(rest);
    check_range(v, 1);
    Sieve sieve(Q < 2 ? 2 : Q);
    for (uint32_t q = 2; q <= Q; ++q)
      if (sieve.is_prime(q)) values[q] = v;
  } else if (kind == "smooth-support") {
    auto colon2 = rest.find(':');
    if (colon2 == std::string::npos)
      throw std::invalid_argument("smooth-support needs <rat>:<B>");
    Rat v = parse_rat(rest.substr(0, colon2));
    check_range(v, 1);
    long B = std::stol(rest.substr(colon2 + 1));
    if (B < 2) throw std::invalid_argument("smooth-support: B must be >= 2");
    for (uint32_t q = 1; q <= Q; ++q)
      if (smooth_part(q, Rat(B)) == q) values[q] = v;
  } else if (kind == "file") {
    PsiFunction psi = read_psi_file(rest);
    if (psi.limit() < Q)
      throw std::invalid_argument("psi file limit " + std::to_string(psi.limit()) +
                                  " smaller than requested Q=" + std::to_string(Q));
    for (uint32_t q = 1; q <= Q; ++q) values[q] = psi.at(q);
  } else {
    throw std::invalid_argument("unknown psi spec: " + spec);
  }
  return PsiFunction(Q, std::move(values));
}

}  // namespace redfrac
