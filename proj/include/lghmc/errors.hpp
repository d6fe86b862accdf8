#pragma once

#include <stdexcept>

namespace lghmc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or out-of-range matrix dimensions.
struct DimensionError : Error {
  using Error::Error;
};

// Input norm exceeds the convergence threshold of the truncated series.
struct ThresholdError : Error {
  using Error::Error;
};

// Gram-Schmidt hit a row whose self inner product vanishes.
struct DegenerateRowError : Error {
  using Error::Error;
};

// A structural precondition is violated (matrix not antisymmetric, no
// registered normal decomposition, ...).
struct StructureError : Error {
  using Error::Error;
};

// Eigenvalue clustering, complex eigenvalue pairs, or QR non-convergence in
// the Schur path.
struct SchurError : Error {
  using Error::Error;
};

// Invalid or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// The space does not support the requested operation (momentum refreshment
// needs a normalizable kinetic distribution).
struct CapabilityError : Error {
  using Error::Error;
};

}  // namespace lghmc
