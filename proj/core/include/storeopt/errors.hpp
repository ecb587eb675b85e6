#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace storeopt {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sequence lengths disagree or a sequence is empty.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (q <= 0, negative capacity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A builder was handed a scenario it does not model.
class WrongBuilderError : public Error {
 public:
  using Error::Error;
};

// No feasible charge vector exists. `index` is the 0-based interval of the
// first cumulative bound that cannot be met.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Scale factors would leave the normal floating-point range.
class NumericalRangeError : public Error {
 public:
  using Error::Error;
};

// Regression could not be computed from the supplied data.
class FitError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds the size a test-scale method supports.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A sweep produced no feasible cell.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace storeopt
