#pragma once

#include <stdexcept>
#include <string>

namespace pairscatter {

// Violation of a configuration or domain invariant. Raised before any
// computation starts; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical self-check failed (guard band, unitarity, statistics).
// The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pairscatter
