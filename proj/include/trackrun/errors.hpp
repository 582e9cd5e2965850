#pragma once

#include <stdexcept>
#include <string>

namespace trackrun {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed rationals, violated preconditions, schema problems.
// The CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// A construction would need more runners than the configured cap allows.
struct InfeasibleScaleError : ValidationError {
    using ValidationError::ValidationError;
};

// A certified computation could not be decided at the requested precision.
struct PrecisionExhaustedError : Error {
    using Error::Error;
};

}  // namespace trackrun
