#pragma once

#include <stdexcept>
#include <string>

namespace sle {

/// Bad parameters or a precondition the caller can fix.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The computation itself failed (pole hit, refinement budget exhausted, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

} // namespace sle
