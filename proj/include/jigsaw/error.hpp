#pragma once

#include <stdexcept>
#include <string>

namespace jigsaw {

// Bad input: out-of-range vertex, malformed spec string, violated precondition.
// The CLI maps this to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (e.g. g_sigma at x <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine ran out of budget before meeting its tolerance.
// Carries the best estimate so callers can still report it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

// The p-interval handed to critical-probability search does not straddle 1/2.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing an output or config file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jigsaw
