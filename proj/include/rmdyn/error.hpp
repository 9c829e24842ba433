#pragma once

#include <stdexcept>
#include <string>

namespace rmdyn {

// Invalid parameters, mismatched dimensions, malformed input files.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A request that exceeds a hard enumeration/memory cap.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rmdyn
