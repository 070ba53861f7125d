#pragma once

#include <stdexcept>
#include <string>

namespace aggrlim {

// Violated precondition or malformed configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A simulation that cannot continue without biasing its output, e.g. a
// stationary Poisson mean beyond the supported range. Maps to exit code 3.
class RuntimeAbort : public std::runtime_error {
 public:
  explicit RuntimeAbort(const std::string& what) : std::runtime_error(what) {}
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aggrlim
