#pragma once

#include <stdexcept>
#include <string>

namespace vmfem {

/// Bad user input: counts, degrees, ranges.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A physical state the constitutive laws cannot evaluate (negative
/// temperature, NaN). Usually means the nonlinear solve has diverged.
class InvalidState : public std::runtime_error {
public:
  explicit InvalidState(const std::string& what, int element = -1)
      : std::runtime_error(element >= 0 ? what + " (element " + std::to_string(element) + ")" : what),
        element_(element) {}

  int element() const noexcept { return element_; }

private:
  int element_;
};

class LinearSolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

} // namespace vmfem
