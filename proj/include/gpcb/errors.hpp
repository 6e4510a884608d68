#pragma once

#include <stdexcept>
#include <string>

namespace gpcb {

/// Invalid configuration (bad field value, unknown key, unresolvable path).
/// Messages name the offending config field path, e.g. "policy.delta".
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller passed inconsistent data (dimension or length mismatch).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Factorization breakdown that survived the jitter retries.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while writing traces, manifests or reports.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance too large for exhaustive diagnostics.
struct SizeError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace gpcb
