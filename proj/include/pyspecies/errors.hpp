#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pyspecies {

// Base for every error raised by the library. The CLI maps each subclass to
// a distinct process exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number (0 if not line-bound).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::int64_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::int64_t line() const noexcept { return line_; }

private:
  std::int64_t line_;
};

// The data sit on a boundary where the model has no interior estimate
// (e.g. all observations distinct).
class PathologyError : public Error {
public:
  using Error::Error;
};

// An exact computation was requested beyond its supported size.
class SizeGuardError : public Error {
public:
  using Error::Error;
};

// Loss of accuracy or non-convergence.
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace pyspecies
