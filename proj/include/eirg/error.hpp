#pragma once

#include <stdexcept>
#include <string>

namespace eirg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (range, shape, symmetry).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Some realized or expected degree is zero, so D^{-1/2} or T^{-1/2} is undefined.
class IsolatedVertex : public Error {
 public:
  explicit IsolatedVertex(std::size_t vertex, const std::string& which)
      : Error(which + " degree of vertex " + std::to_string(vertex) + " is zero"),
        vertex_(vertex) {}

  std::size_t vertex() const noexcept { return vertex_; }

 private:
  std::size_t vertex_;
};

/// An exhaustive enumeration would exceed its work budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic overflowed 64 bits.
class Overflow : public Error {
 public:
  using Error::Error;
};

class EmptyExperiment : public Error {
 public:
  EmptyExperiment() : Error("experiment has zero trials") {}
};

/// Malformed configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace eirg
