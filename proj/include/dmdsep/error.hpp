#pragma once

#include <stdexcept>
#include <string>

namespace dmdsep {

/// Bad input: wrong shapes, out-of-range parameters, malformed files.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An algorithm could not produce a trustworthy answer (non-convergence,
/// indefinite matrix where definiteness is required, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dmdsep
