#pragma once

#include <stdexcept>
#include <string>

namespace resurgence {

// Bad input: wrong shape, out-of-domain argument, mixed coefficient domains.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainMismatch : ValidationError {
    using ValidationError::ValidationError;
};

// A numerical procedure failed to reach its target; carries what it achieved.
struct NumericError : std::runtime_error {
    double achieved = 0;
    NumericError(const std::string& what, double achieved_error = 0)
        : std::runtime_error(what), achieved(achieved_error) {}
};

struct SingularHit : NumericError {
    using NumericError::NumericError;
};

}  // namespace resurgence
