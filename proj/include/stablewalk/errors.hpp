#pragma once

#include <stdexcept>
#include <string>

namespace stablewalk {

/// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Length or level mismatch between containers.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid experiment or tool configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A log-scale fit was handed a nonpositive value.
class FitError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace stablewalk
