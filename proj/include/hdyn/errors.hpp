#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside (or on the boundary of) the model it was built for,
/// or a quotient is evaluated at a degenerate input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A map produced a value outside its model. `margin` is the value of the
/// model-defining functional at the offending image (<= 0 or NaN).
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double margin, std::size_t index = 0)
      : Error(what), margin_(margin), index_(index) {}

  double margin() const noexcept { return margin_; }
  std::size_t index() const noexcept { return index_; }

 private:
  double margin_;
  std::size_t index_;
};

/// Maps (or a map and a point) that live in different models were combined.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

/// Numerical estimation could not reach a determinate answer.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on an input that does not meet its contract
/// (wrong dynamical type, orbit too short, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or serialized document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdyn
