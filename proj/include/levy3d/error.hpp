#pragma once

#include <stdexcept>
#include <string>

namespace levy3d {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation completes but its result is unusable
/// (all trials truncated, singular absorption system, empty fit window).
class DiagnosticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw InvalidInput(message);
    }
}

}  // namespace detail
}  // namespace levy3d
