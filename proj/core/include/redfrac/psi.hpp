#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "redfrac/rational.hpp"

namespace redfrac {

// Finite table q -> psi(q) of exact rationals in [0, 1/2], q = 1..limit.
class PsiFunction {
 public:
  PsiFunction(uint32_t limit, std::vector<Rat> values);

  uint32_t limit() const { return limit_; }
  const Rat& at(uint32_t q) const;

  bool operator==(const PsiFunction& o) const {
    return limit_ == o.limit_ && values_ == o.values_;
  }

 private:
  uint32_t limit_;
  std::vector<Rat> values_;  // index q, slot 0 unused
};

// File format: first line "Q <integer>", then one line "<q> <num>/<den>" for
// every q = 1..Q in ascending order. A missing or out-of-range q is an error.
PsiFunction read_psi(std::istream& in);
PsiFunction read_psi_file(const std::string& path);
void write_psi(std::ostream& out, const PsiFunction& psi);

// Generator specs:
//   constant:<rat>
//   reciprocal-log              psi(q) = min(1/2, 1/ceil(log2(q+1)))
//   prime-support:<rat>         value on primes, 0 elsewhere
//   smooth-support:<rat>:<B>    value on B-smooth q, 0 elsewhere
//   file:<path>
PsiFunction generate_psi(const std::string& spec, uint32_t Q);

}  // namespace redfrac
