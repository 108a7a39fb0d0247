#pragma once

#include <stdexcept>
#include <string>

namespace roro {

// Bad input data or configuration. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Calendars that cannot be reconciled.
class AlignmentError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A well-formed input that the numerics cannot process (value annihilation,
// zero volatility, ...). The CLI maps this to exit code 3.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace roro
