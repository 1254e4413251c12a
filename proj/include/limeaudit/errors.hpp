#pragma once

#include <stdexcept>
#include <string>

namespace limeaudit {

/// Bad arguments to a library operation (dimension mismatch, invalid value).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problems with external inputs: missing files, malformed data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A black-box model misbehaved (non-finite probabilities, bad shape).
class ModelError : public DataError {
 public:
  using DataError::DataError;
};

/// Operation called out of order (e.g. transform before fit).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace limeaudit
