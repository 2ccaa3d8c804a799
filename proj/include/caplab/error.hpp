#pragma once

#include <stdexcept>
#include <string>

namespace caplab {

/// Bad argument: out-of-range parameter, malformed file, violated type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of a bound does not hold for the inputs.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request is well-formed but exceeds a configured size cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace caplab
