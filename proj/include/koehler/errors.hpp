#ifndef KOEHLER_ERRORS_HPP_
#define KOEHLER_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace koehler {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or violated precondition (malformed matrix, bad tolerance,
// non-power-bounded input to an operation that requires it, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to converge within its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Eigenvalue groups too close to separate the invariant subspaces.
class IllConditionedSplit : public Error {
 public:
  IllConditionedSplit(const std::string& what, double gap)
      : Error(what), gap(gap) {}
  double gap;
};

// A search horizon was exhausted before the target event occurred.
class HorizonError : public Error {
 public:
  using Error::Error;
};

// A configured size cap was exceeded (orbit net, semigroup closure).
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Epsilon-collapse of float-matrix products broke associativity.
class CollapseTooCoarse : public Error {
 public:
  using Error::Error;
};

// Requested analysis needs element metadata the semigroup does not carry.
class UnsupportedInput : public Error {
 public:
  using Error::Error;
};

// A certificate the implementation guarantees by construction failed.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace koehler

#endif  // KOEHLER_ERRORS_HPP_
