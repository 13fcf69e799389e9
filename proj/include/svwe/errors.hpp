#pragma once

#include <stdexcept>
#include <string>

namespace svwe {

// Error hierarchy. Every condition the library can reject carries its own
// type so callers (and the CLI exit-code mapping) can distinguish config
// errors from runtime failures.

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Grid too coarse (or box too small) to resolve a kernel at the requested
// time. Message names the offending scale.
struct InsufficientResolution : Error {
    using Error::Error;
};

// Real-space evaluation requested for a kernel that is not function-valued
// (wave family in n = 3).
struct NotFunctionValued : Error {
    using Error::Error;
};

// A noise increment was requested before the step's integrand was committed.
struct AdaptednessViolation : Error {
    using Error::Error;
};

// A solver state coefficient became NaN/Inf.
struct NonFiniteState : Error {
    using Error::Error;
};

// The zero frequency mode was passed where the Neumann-to-Dirichlet
// multiplier 1/|xi| is undefined.
struct DegenerateMode : Error {
    using Error::Error;
};

// Log-log fit was requested over an empty window.
struct FitWindowEmpty : Error {
    using Error::Error;
};

// Bad user-supplied configuration (CLI exit code 2). Message names the field.
struct ConfigError : Error {
    using Error::Error;
};

// Structure-function fit window violates the lag-span requirement.
struct InsufficientLagSpan : ConfigError {
    using ConfigError::ConfigError;
};

// Adaptive quadrature failed to converge; message carries diagnostics.
struct QuadratureFailure : Error {
    using Error::Error;
};

}  // namespace svwe
