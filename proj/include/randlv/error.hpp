#pragma once

#include <stdexcept>
#include <string>

namespace randlv {

// Bad user input: unknown tag, malformed file, missing key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the numerical domain failed (p outside (0,1),
// parameters outside the admissible region, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An algorithm ran but did not deliver: non-convergence, pivot budget,
// loss of positivity during integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace randlv
