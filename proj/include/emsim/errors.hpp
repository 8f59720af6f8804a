#pragma once

#include <stdexcept>
#include <string>

namespace emsim {

// Semantic failure of a scenario ("no relay candidate", ...). CLI exit 3.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration constraint violation; message names the key and the
// violated constraint. CLI exit 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure (missing input, unwritable output). CLI exit 2.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace emsim
