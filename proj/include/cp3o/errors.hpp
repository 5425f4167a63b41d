#pragma once

#include <stdexcept>
#include <string>

namespace cp3o {

// Bad data: non-finite values, malformed CSV cells, invalid transforms.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Bad run parameters: series too short, alpha out of range, etc.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cp3o
