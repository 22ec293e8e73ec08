#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wovl {

// Base of every error raised by the library. Callers that only need a
// message can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (x <= 0, p outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A sample that admits no estimate: all values equal, zero spread, too small.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// Iterative solver hit its cap. Carries the last iterate so callers can
// inspect how far off it was.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_iterate,
                      double last_residual, int iterations)
      : Error(what),
        last_iterate_(last_iterate),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_iterate() const noexcept { return last_iterate_; }
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_iterate_;
  double last_residual_;
  int iterations_;
};

// Adaptive quadrature could not meet its tolerance within the subdivision budget.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// The requested integral does not exist (e.g. ∫f² with shape <= 1/2).
class DivergentIntegralError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. line() is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A scenario could not be completed (too many failed replications, ...).
class ScenarioAbortError : public Error {
 public:
  using Error::Error;
};

}  // namespace wovl
