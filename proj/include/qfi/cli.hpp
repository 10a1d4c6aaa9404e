#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qfi/fock.hpp"

// Command runners behind the qfi_ecs executable. Kept in the library so the
// exit-code and output contracts are directly testable.

namespace qfi::cli {

enum class Command { sweep, verify, crossings };
enum class Format { csv, json };

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitThresholdViolation = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericFailure = 3;

struct RunConfig {
  Command command = Command::sweep;
  std::complex<double> alpha{2.0, 0.0};
  std::vector<double> r_grid;          // reflectivities in [0, 1]
  std::optional<int> truncation;       // forced n_max for the verify oracle
  std::string out_path;                // empty: write to the given stream
  Format format = Format::csv;
  double tolerance = 0.0;              // 0: per-command default
  long long max_dim = fock::kDefaultDimensionCap;
};

/// Parses "start:stop:step" or a comma-separated list of reflectivities.
/// Throws std::invalid_argument on malformed specs, nonpositive step or
/// values outside [0, 1].
std::vector<double> parse_r_spec(const std::string& spec);

/// Runs one command, writing the report to `out` (or config.out_path when
/// set) and diagnostics to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qfi::cli
