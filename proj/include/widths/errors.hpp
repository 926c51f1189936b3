#pragma once

#include <stdexcept>
#include <string>

namespace widths {

// Root of the library's error hierarchy. Everything thrown on purpose
// derives from this, so callers can catch widths::Error and map it to
// a process exit code in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad values handed directly to an operation: non-finite coordinates,
// mismatched vector/family dimensions, exponents outside [0, 1], ...
struct InvalidInputError : Error {
  using Error::Error;
};

// A query parameter is outside the range an estimator covers
// (n > N/2 for the finite-q estimator, m > N for flat suprema, ...).
struct RangeError : Error {
  using Error::Error;
};

// A hypothesis of the selected estimator fails for these inputs,
// e.g. the pairwise weight-ratio condition 1 <= kappa <= N.
struct PreconditionError : Error {
  using Error::Error;
};

// The estimator exists but a different one covers this query
// (q = inf handed to the finite-q path and vice versa).
struct RedirectError : PreconditionError {
  using PreconditionError::PreconditionError;
};

// No formula in this library covers the requested (p, q) regime.
struct UnsupportedRegimeError : Error {
  using Error::Error;
};

// Malformed run configuration (schema violations, unknown keys, ...).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace widths
