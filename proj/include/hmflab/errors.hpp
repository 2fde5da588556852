#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

/// Caller violated a precondition (bad sizes, out-of-range sites, bad config).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to converge or a result failed its own
/// consistency check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix function was requested outside its domain, e.g. the log of a
/// matrix that is not positive definite.
class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, double smallest_eigenvalue)
      : std::domain_error(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  [[nodiscard]] double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// A fit was asked for with fewer usable points than it needs.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hmf
