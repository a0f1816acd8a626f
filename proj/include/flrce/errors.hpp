#pragma once

#include <stdexcept>
#include <string>

namespace flrce {

// Invalid experiment/model/data configuration detected before or during setup.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (CSV or config). Message carries the 1-based line number
// when one is known.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace flrce
