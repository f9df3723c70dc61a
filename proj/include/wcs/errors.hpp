#pragma once

#include <stdexcept>
#include <string>

namespace wcs {

// Invalid scenario file or parameter set; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal consistency violation (scheduling in the past, impossible MAC
// state transition). Always a simulator bug, never a user error.
class SimFault : public std::logic_error {
  public:
    explicit SimFault(const std::string& what) : std::logic_error(what) {}
};

}  // namespace wcs
