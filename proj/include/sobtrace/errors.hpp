#pragma once

#include <stdexcept>
#include <string>

namespace sobtrace {

/// Input outside the mathematical domain of an operation (|z0| >= 1, unsupported order/dimension, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The Moebius map sends -e_{n+1} to infinity.
class PolePointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A field was evaluated inside its recorded singular set.
class SingularPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stencil or sphere average would leave the field's domain.
class ClearanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required boundary condition or structural assumption does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonZonalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sobtrace
