#pragma once

#include <stdexcept>
#include <string>

namespace lastexit {

/// Argument outside the mathematical domain of a function (e.g. psi at a negative point).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Model parameters that do not describe a valid spectrally negative process,
/// or a model that lacks a property an operation requires (sign of psi'(0+)).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A query argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical method failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lastexit
