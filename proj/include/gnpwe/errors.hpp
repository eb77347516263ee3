#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gnpwe {

/// Base class for every error raised by the library. Domain errors map to
/// exit code 1 in the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponent or coefficient size beyond the configured limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

/// A symbol occurring in a polynomial has no value in the evaluation binding.
class IncompleteBindingError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument for the mathematical object (bad dimension, a jet
/// coordinate inside a characteristic, linear f, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptySystemError : public Error {
 public:
  using Error::Error;
};

class StencilError : public Error {
 public:
  using Error::Error;
};

/// The x-marching solver blew up.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Initial data with nonzero t-mean handed to the x-marching solver.
class GaugeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace gnpwe
