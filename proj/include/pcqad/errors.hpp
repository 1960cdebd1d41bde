#pragma once

#include <stdexcept>

namespace pcqad {

/// Invalid physical parameters or preconditions (exit code 2 at the CLI).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent configuration file (exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Solver / root-finder failure (exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested problem exceeds a configured resource cap (exit code 3).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data does not support the requested fit (exit code 3).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pcqad
