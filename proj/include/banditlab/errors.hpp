#pragma once

#include <stdexcept>
#include <string>

namespace banditlab {

// Error taxonomy shared across the library.  The CLI maps each family to a
// distinct process exit code, so keep the hierarchy flat and unambiguous.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration: unknown keys, out-of-range values,
// incompatible agent/environment pairings.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or inconsistent input data: unreadable files, ragged rows,
// schema/table mismatches.
struct DataError : Error {
    using Error::Error;
};

// Numerical failure at runtime: non-finite values crossing a module
// boundary, Cholesky breakdown, degenerate normalization.
struct NumericError : Error {
    using Error::Error;
};

// Shape/contract violation between components (treated as configuration).
struct DimensionError : ConfigError {
    using ConfigError::ConfigError;
};

}  // namespace banditlab
