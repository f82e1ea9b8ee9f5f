#pragma once

#include <stdexcept>
#include <string>

namespace fakenews {

// Exit-code families used by the command-line tool: usage 1, data 2, numeric 3.

/// Bad configuration, flag value or hyperparameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, malformed or insufficient input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values or a failed numeric self-check.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fakenews
