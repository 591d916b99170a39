#pragma once

#include <stdexcept>
#include <string>

namespace allee {

/// Invalid model parameters (bad amplitude, non-positive period, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Right-hand side evaluated outside its domain (Leslie-Gower N + c(t) <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IntegrationError : public std::runtime_error {
 public:
  enum class Kind { StepUnderflow, MaxStepsExceeded, NegativeUndershoot, NonFinite };

  IntegrationError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(IntegrationError::Kind kind) noexcept;

class OrbitError : public std::runtime_error {
 public:
  enum class Kind {
    SingularJacobian,
    NoConvergence,
    LeftDomain,
    BracketFailure,
    NuAboveThreshold,
    DegenerateOrbit,
    WrongFamily,
  };

  OrbitError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* to_string(OrbitError::Kind kind) noexcept;

/// Raised by regime analysis when the model fails its structural checks.
class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Leslie-Gower predator-axis analysis where df/dP(t, 0, P0*) != 0.
class ResponseNotPreyDependentAtAxis : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace allee
