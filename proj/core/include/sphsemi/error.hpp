#pragma once

#include <stdexcept>
#include <string>

namespace sphsemi {

// Invalid degree, parameter, or domain value passed to a numerical routine.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A polynomial that does not satisfy the regularity conditions of an
// exponential-type semigroup.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A series could not be truncated below the requested tail tolerance within
// the configured degree cap.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical kernel (eigen-solver, root search) failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent measurement data (sign mismatches, length mismatches).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sphsemi
