#pragma once

#include <stdexcept>
#include <string>

namespace lsviae {

/// Raised when a caller passes parameters outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on numerical breakdown (non-PD matrices, NaN in a model).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the exact solvers when a state has no safe action.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(int step, int state, const std::string& what)
      : std::runtime_error(what), step_(step), state_(state) {}

  int step() const noexcept { return step_; }
  int state() const noexcept { return state_; }

 private:
  int step_;
  int state_;
};

/// Raised when reading or writing files fails; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lsviae
