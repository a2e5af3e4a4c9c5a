#pragma once

#include <stdexcept>
#include <string>

namespace redfrac {

// A proved statement failed on concrete data: either the implementation or
// the transcription is wrong. Carries a serialized counterexample when one
// exists.
struct TheoremViolation : std::logic_error {
  explicit TheoremViolation(const std::string& what, std::string artifact_ = "")
      : std::logic_error(what), artifact(std::move(artifact_)) {}
  std::string artifact;
};

}  // namespace redfrac
