#pragma once

#include <stdexcept>
#include <string>

namespace surro {

/// Bad configuration: unknown names, out-of-range parameters, incompatible
/// dimensions. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad data: malformed input files, non-finite values, missing subjects.
/// CLI maps this to exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: singular matrices that survive jitter, degenerate
/// variances. CLI maps this to exit code 4.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace surro
