#pragma once

#include <stdexcept>
#include <string>

namespace lambda_dem {

/// Parameter set or configuration rejected before any integration starts.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a time integration; `time` is where it happened.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time, int component = -1)
      : std::runtime_error(what), time_(time), component_(component) {}

  double time() const noexcept { return time_; }
  /// Offending state-vector component, or -1 when not component specific.
  int component() const noexcept { return component_; }

 private:
  double time_;
  int component_;
};

/// A density matrix eigenvalue fell below the positivity tolerance.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NonHermitianError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Both couplings entering the dressed basis vanish.
class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lambda_dem
