#pragma once

#include <stdexcept>
#include <string>

namespace imbboost {

// Raised for contract violations on inputs: bad files, schema mismatches,
// invalid parameters. Messages lead with a short stable phrase
// ("header mismatch", "non-binary label", ...) followed by detail.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imbboost
