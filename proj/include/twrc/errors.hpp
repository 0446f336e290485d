#pragma once
#include <stdexcept>
#include <string>

namespace twrc {

// Configuration and input errors map to process exit code 2,
// numerical failures (singular solves, non-ergodic chains) to exit code 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonErgodicError : NumericalError {
  explicit NonErgodicError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace twrc
