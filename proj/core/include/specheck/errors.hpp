#pragma once

#include <stdexcept>
#include <string>

namespace specheck {

// Bad arguments: wrong dimensions, out-of-range parameters, malformed input files.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The eigensolver did not converge within its sweep budget. Never swallowed.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A simple-eigenvalue formula was asked about a degenerate (clustered) eigenvalue.
struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specheck
