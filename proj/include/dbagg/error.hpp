#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbagg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural invariant (unknown symbol, arity mismatch,
/// out-of-range agent index, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A configured enumeration cap would be exceeded.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace dbagg
