#pragma once

#include <stdexcept>

namespace qfi {

// Base class for numerical-domain failures. Grid sweeps catch this to flag a
// row instead of aborting the whole run.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A 2x2 matrix with negative determinant beyond the clamping window cannot
// represent a physical state.
struct NotPhysical : Error {
  using Error::Error;
};

// 1 - 4 det is too close to zero; the closed-form eigenvector formula divides
// by sqrt(1 - 4 det).
struct DegenerateSpectrum : Error {
  using Error::Error;
};

// |<Psi1|Psi2>| is numerically 1; the two basis states no longer span a plane.
struct BasisCollapse : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct NonHermitianInput : Error {
  using Error::Error;
};

// Central difference fell below the floating-point noise floor.
struct StepTooSmall : Error {
  using Error::Error;
};

struct ZeroInformation : Error {
  using Error::Error;
};

// Coherent-state tail mass beyond the truncation exceeds the allowed loss.
struct TruncationTooLossy : Error {
  using Error::Error;
};

struct DimensionCap : Error {
  using Error::Error;
};

// alpha = 0 collapses the entangled coherent state onto vacuum; spectral
// quantities are undefined there.
struct DegenerateLimit : Error {
  using Error::Error;
};

}  // namespace qfi
