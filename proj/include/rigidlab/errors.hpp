#pragma once

#include <stdexcept>
#include <string>

namespace rigidlab {

/// Raised when an input violates a documented precondition (bad shape,
/// unsupported modulus, zero divisor, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a materialization cap or a work budget would be exceeded.
/// The CLI maps this to exit code 3.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rigidlab
