#pragma once

#include <stdexcept>
#include <string>

namespace cbi {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric routine produced a non-finite value (step too large, extreme
// parameters).
struct NonFiniteError : Error {
  using Error::Error;
};

// A simulation scheme was requested that the parameter set does not support.
struct InvalidConfigError : Error {
  using Error::Error;
};

// exact_cir_step called with C = 0; the caller must use the deterministic
// drift instead.
struct DegenerateDiffusionError : Error {
  using Error::Error;
};

// The denominator of the limit vector is not positive (discretization
// artifact; callers discard the replicate).
struct DegenerateDenominatorError : Error {
  using Error::Error;
};

// Transformed estimates were requested but absent.
struct MissingEstimateError : Error {
  using Error::Error;
};

// An operation defined only for the pure immigration regime (C = 0) was
// called with C != 0.
struct RequiresPureImmigrationError : Error {
  using Error::Error;
};

struct DegenerateImmigrationError : Error {
  using Error::Error;
};

// Quadrature step failed its Richardson accuracy check.
struct StepTooCoarseError : Error {
  using Error::Error;
};

// Experiment configuration violates an invariant.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace cbi
