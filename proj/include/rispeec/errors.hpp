#pragma once

#include <stdexcept>
#include <string>

namespace rispeec {

/// Invalid scenario/config input. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (singular system, residual out of contract, ...).
/// Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rispeec
