#pragma once

#include <stdexcept>
#include <string>

namespace sturmlab {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidCoefficient : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Step-size underflow or step budget exhaustion; `reached()` is the last
/// accepted time.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double reached)
      : Error(what + " (reached t=" + std::to_string(reached) + ")"), reached_(reached) {}
  double reached() const noexcept { return reached_; }

 private:
  double reached_;
};

/// p vanishes somewhere, so the equation cannot be written as a first-order
/// system with f = 1/p.
class ReductionError : public Error {
 public:
  ReductionError(const std::string& what, double witness)
      : Error(what + " (p vanishes near t=" + std::to_string(witness) + ")"), witness_(witness) {}
  double witness() const noexcept { return witness_; }

 private:
  double witness_;
};

}  // namespace sturmlab
