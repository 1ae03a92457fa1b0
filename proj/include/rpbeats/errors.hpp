#pragma once

#include <stdexcept>
#include <string>

namespace rpbeats {

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Relaxation times or probabilities outside the physical range.
struct UnphysicalParameters : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& msg, int line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line(line) {}
  int line;
};

}  // namespace rpbeats
