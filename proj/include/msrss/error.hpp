#pragma once

#include <stdexcept>
#include <string>

namespace msrss {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (maps to a usage error in the CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data or I/O failure.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace msrss
