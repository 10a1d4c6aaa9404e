#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qfi/ecs.hpp"
#include "qfi/errors.hpp"

// Precision-limit references (shot noise, Heisenberg, Hofmann) and the
// reflectivities where the lossy-ECS QFI crosses each of them.

namespace qfi::limits {

using Complex = std::complex<double>;

struct PrecisionLimits {
  double shot_noise = 0.0;  // n_bar
  double heisenberg = 0.0;  // n_bar^2
  double hofmann = 0.0;     // (1 + |alpha|^2) n_bar
};

struct Crossing {
  bool present = false;
  double R = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  // |F(R) - limit|
};

struct CrossingReport {
  Crossing hofmann;     // R_A
  Crossing heisenberg;  // R_B
  Crossing shot_noise;  // R_C
};

struct SweepRow {
  double R = 0.0;
  double T = 0.0;
  double F = 0.0;
  PrecisionLimits limits;
  std::string flags;  // empty, "degenerate_alpha", "full_loss" or "error:..."
};

/// (n_bar, n_bar^2, (1 + |alpha|^2) n_bar). Throws DegenerateLimit at
/// alpha = 0.
PrecisionLimits limits_for(Complex alpha);

/// Reflectivities where F(R) = limit, one per precision limit. Brackets come
/// from a coarse scan in steps of 0.01; bisection then shrinks the bracket to
/// min(tolerance, 1e-12) so the residual in F stays below 1e-9. A limit the
/// QFI never reaches is reported absent, not an error; alpha = 0 reports all
/// three absent.
CrossingReport find_crossings(Complex alpha, double tolerance = 1e-6);

/// Fig-style sweep: one row per reflectivity with the QFI and the constant
/// limits. Per-point failures flag the row instead of aborting.
std::vector<SweepRow> sweep_qfi(Complex alpha, std::span<const double> r_grid);

}  // namespace qfi::limits
