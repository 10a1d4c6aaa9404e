#include <complex>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qfi/cli.hpp"

namespace {

// Resolution order for the Fock dimension cap: QFI_MAX_DIM, then the
// built-in default. There is no flag for it; everything else follows
// flags > env > defaults.
bool resolve_max_dim(long long& max_dim, std::string& message) {
  const char* env = std::getenv("QFI_MAX_DIM");
  if (env == nullptr) return true;
  char* end = nullptr;
  const long long value = std::strtoll(env, &end, 10);
  if (end == env || *end != '\0' || value < 2) {
    message = std::string("QFI_MAX_DIM='") + env + "' is not a dimension";
    return false;
  }
  max_dim = value;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quantum Fisher information of entangled coherent states in a lossy "
      "Mach-Zehnder interferometer"};
  app.require_subcommand(1);

  double alpha_mag = 0.0;
  double alpha_phase = 0.0;
  std::string r_spec;
  int truncation = 0;
  std::string out_path;
  std::string format = "csv";
  double tolerance = 0.0;

  const auto add_common = [&](CLI::App* cmd, const std::string& default_r) {
    cmd->add_option("--alpha", alpha_mag, "input amplitude magnitude |alpha|")
        ->required();
    cmd->add_option("--alpha-phase", alpha_phase,
                    "input amplitude phase in radians (results depend on "
                    "|alpha| only)");
    if (!default_r.empty()) {
      cmd->add_option("--r", r_spec,
                      "reflectivity grid, start:stop:step or comma list "
                      "(default " +
                          default_r + ")");
      cmd->parse_complete_callback([&r_spec, default_r, cmd] {
        if (cmd->count("--r") == 0) r_spec = default_r;
      });
    }
    cmd->add_option("--truncation", truncation,
                    "force the per-mode Fock truncation n_max");
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tolerance", tolerance,
                    "crossings: root tolerance in R; verify: QFI relative "
                    "error threshold");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "QFI vs reflectivity table");
  add_common(sweep, "0:1:0.01");
  CLI::App* verify = app.add_subcommand(
      "verify", "closed forms vs the truncated Fock-space oracle");
  add_common(verify, "0:0.9:0.1");
  CLI::App* crossings = app.add_subcommand(
      "crossings", "reflectivities where the QFI meets each precision limit");
  add_common(crossings, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qfi::cli::kExitConfigError;
  }

  qfi::cli::RunConfig config;
  if (sweep->parsed()) config.command = qfi::cli::Command::sweep;
  if (verify->parsed()) config.command = qfi::cli::Command::verify;
  if (crossings->parsed()) config.command = qfi::cli::Command::crossings;

  if (alpha_mag < 0.0) {
    std::cerr << "config error: |alpha| must be >= 0\n";
    return qfi::cli::kExitConfigError;
  }
  config.alpha = std::polar(alpha_mag, alpha_phase);
  if (!r_spec.empty()) {
    try {
      config.r_grid = qfi::cli::parse_r_spec(r_spec);
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return qfi::cli::kExitConfigError;
    }
  }
  if (truncation != 0) config.truncation = truncation;
  config.out_path = out_path;
  config.format =
      format == "json" ? qfi::cli::Format::json : qfi::cli::Format::csv;
  config.tolerance = tolerance;

  std::string env_message;
  if (!resolve_max_dim(config.max_dim, env_message)) {
    std::cerr << "config error: " << env_message << '\n';
    return qfi::cli::kExitConfigError;
  }

  return qfi::cli::run(config, std::cout, std::cerr);
}
