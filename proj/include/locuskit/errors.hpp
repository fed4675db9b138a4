#pragma once

#include <stdexcept>
#include <string>

namespace locuskit {

/// An argument lies outside the domain on which an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for numerical failures that are reported rather than papered over.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zeros too close together to be separated at the requested tolerance.
class UnresolvedCluster : public ComputationError {
 public:
  UnresolvedCluster(double lo, double hi)
      : ComputationError("unresolved cluster in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]"),
        lo_(lo),
        hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class NoSecondZero : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class WindowExhausted : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class BracketFailure : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class FrontierOverflow : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NotCornerWitness : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// The perturbation exponent is too small for the displaced zeros to sit in
/// their one-sided brackets.
class PerturbationTooSmall : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace locuskit
