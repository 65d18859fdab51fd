#pragma once

#include <stdexcept>
#include <string>

namespace reflectsim {

/// Raised when an operation receives arguments outside its domain.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool condition, const char* message) {
    if (!condition) {
        throw ParameterError(message);
    }
}

}  // namespace reflectsim
