#pragma once

#include <stdexcept>
#include <string>

namespace bhchaos {

// Base of all library errors. The CLI maps the subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-facing configuration or construction request.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A Hilbert space or matrix exceeds the configured capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Loss of accuracy or non-convergence in a numerical routine.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bhchaos
