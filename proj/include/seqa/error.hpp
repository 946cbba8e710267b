#pragma once

#include <stdexcept>
#include <string>

namespace seqa {

// Input rows, files or matrices that violate a documented format or precondition.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad flag values, unknown keys, inconsistent options.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerically degenerate input (constant matrix, zero-weight clustering, ...).
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace seqa
