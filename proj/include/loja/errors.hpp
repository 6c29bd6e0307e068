#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loja {

/// Malformed polynomial text. position() is a 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Point or variable-count mismatch.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation's precondition does not hold for this input.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Degree or term-count cap exceeded.
class LimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A numeric search (radius halving, integration) ran out of room.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace loja
