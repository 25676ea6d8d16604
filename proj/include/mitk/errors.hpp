#pragma once

#include <stdexcept>
#include <string>

namespace mitk {

/// Malformed or invariant-violating input (bad document, bad field value).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller-side precondition of an operation does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An internal consistency assertion failed; indicates a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mitk
