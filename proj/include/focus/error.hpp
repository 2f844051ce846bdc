#pragma once

#include <stdexcept>
#include <string>

namespace focus {

/// Runtime failure carrying a single-line message suitable for CLI reporting.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace focus
