#pragma once

#include <stdexcept>
#include <string>

namespace lmcf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (bad shape, non-positive parameter, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A computation produced a result that breaks a numerical invariant
// (e.g. a real-valued inverse transform with a large imaginary residual).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Input or persisted file that cannot be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidInput(message);
}

}  // namespace detail
}  // namespace lmcf
