#pragma once

#include <stdexcept>
#include <string>

namespace twosided {

/// Argument outside the domain of a curve or model (negative congestion,
/// price beyond the demand support, M/M/1 load at or above capacity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The congestion bracket could not be closed; a custom curve violates
/// the monotonicity the solver relies on.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A growth rate was requested against a non-positive one-sided baseline.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twosided
