#pragma once

#include <stdexcept>
#include <string>

namespace infokernel {

/// Invalid model or configuration input (bad prior table, unknown key, missing kernel).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A call outside the domain where the model is defined, e.g. t >= T or maturity past a release.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite intermediate values or divergent integrals.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent evaluations of the same quantity disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace infokernel
