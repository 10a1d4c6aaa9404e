#include "qfi/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "qfi/ecs.hpp"
#include "qfi/limits.hpp"
#include "qfi/rank2.hpp"

namespace qfi::cli {

namespace {

constexpr double kDefaultRootTolerance = 1e-6;
constexpr double kDefaultQfiThreshold = 1e-6;
constexpr double kEigenvalueThreshold = 1e-9;
// Forced truncations are allowed a much larger coherent tail than the
// adaptive default; anything beyond this is unusable even for rough checks.
constexpr double kForcedTruncationLoss = 1e-3;
// Residuals below this are serialized as decimal strings so no JSON reader
// rounds them away.
constexpr double kJsonStringThreshold = 1e-15;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

nlohmann::ordered_json json_number(double x) {
  if (x != 0.0 && std::abs(x) < kJsonStringThreshold) {
    return fmt17(x);
  }
  return x;
}

nlohmann::ordered_json json_alpha(const std::complex<double>& alpha) {
  return {{"magnitude", std::abs(alpha)}, {"phase", std::arg(alpha)}};
}

double parse_double(const std::string& token) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse '" + token + "' as a number");
  }
  if (consumed != token.size()) {
    throw std::invalid_argument("trailing junk in number '" + token + "'");
  }
  return value;
}

struct VerifyRow {
  double R = 0.0;
  double T = 0.0;
  double f_analytic = 0.0;
  double f_numeric = 0.0;
  double rel_error = 0.0;
  double eig_error = 0.0;
  std::string flags;
};

int write_sweep(const RunConfig& config, const std::vector<limits::SweepRow>& rows,
                std::ostream& os) {
  if (config.format == Format::csv) {
    os << "R,T,F,shot_noise,heisenberg,hofmann,flags\n";
    for (const auto& row : rows) {
      os << fmt17(row.R) << ',' << fmt17(row.T) << ',' << fmt17(row.F) << ','
         << fmt17(row.limits.shot_noise) << ',' << fmt17(row.limits.heisenberg)
         << ',' << fmt17(row.limits.hofmann) << ',' << row.flags << '\n';
    }
    return kExitOk;
  }
  nlohmann::ordered_json j;
  j["alpha"] = json_alpha(config.alpha);
  auto& out_rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    out_rows.push_back({{"R", row.R},
                        {"T", row.T},
                        {"F", row.F},
                        {"shot_noise", row.limits.shot_noise},
                        {"heisenberg", row.limits.heisenberg},
                        {"hofmann", row.limits.hofmann},
                        {"flags", row.flags}});
  }
  os << j.dump() << '\n';
  return kExitOk;
}

int run_sweep(const RunConfig& config, std::ostream& os, std::ostream& err) {
  if (config.r_grid.empty()) {
    err << "config error: sweep needs a non-empty reflectivity grid\n";
    return kExitConfigError;
  }
  const auto rows = limits::sweep_qfi(config.alpha, config.r_grid);
  const int code = write_sweep(config, rows, os);
  for (const auto& row : rows) {
    if (row.flags.rfind("error:", 0) == 0) {
      err << "numeric failure at R=" << fmt17(row.R) << ": "
          << row.flags.substr(6) << '\n';
      return kExitNumericFailure;
    }
  }
  return code;
}

int run_verify(const RunConfig& config, std::ostream& os, std::ostream& err) {
  if (config.r_grid.empty()) {
    err << "config error: verify needs a non-empty reflectivity grid\n";
    return kExitConfigError;
  }
  const double qfi_threshold =
      config.tolerance > 0.0 ? config.tolerance : kDefaultQfiThreshold;

  std::vector<VerifyRow> rows;
  for (double r : config.r_grid) {
    VerifyRow row;
    row.R = r;
    row.T = 1.0 - r;
    try {
      const ecs::EcsScenario scenario(config.alpha, row.T);
      row.f_analytic = ecs::qfi_analytic(scenario).F;

      const int n_max = config.truncation
                            ? *config.truncation
                            : fock::adaptive_n_max(config.alpha);
      const double max_loss =
          config.truncation ? kForcedTruncationLoss : fock::kDefaultTruncationLoss;
      const fock::FockSpace space(n_max, 2, config.max_dim);
      row.f_numeric = fock::numeric_qfi_lossy(config.alpha, row.T, space, max_loss);
      row.rel_error = std::abs(row.f_analytic - row.f_numeric) /
                      std::max(std::abs(row.f_analytic), 1e-12);

      // Dual-route rank-2 spectral check at the same scenario; skipped where
      // the nonorthogonal basis collapses (T = 0 or alpha = 0).
      if (row.T > 0.0 && std::norm(config.alpha) > 0.0) {
        const auto form = ecs::rank2_form(scenario);
        const auto via_gram_schmidt = rank2::eig_nonorthogonal(form);
        const auto direct = rank2::eig_nonorthogonal_direct(form);
        row.eig_error = std::max(
            std::abs(via_gram_schmidt.psi.lambda_plus - direct.lambda_plus),
            std::abs(via_gram_schmidt.psi.lambda_minus - direct.lambda_minus));
      } else {
        row.flags = "rank2_skipped";
      }
    } catch (const std::invalid_argument& e) {
      err << "config error at R=" << fmt17(r) << ": " << e.what() << '\n';
      return kExitConfigError;
    } catch (const Error& e) {
      err << "numeric failure at R=" << fmt17(r) << ": " << e.what() << '\n';
      return kExitNumericFailure;
    }
    rows.push_back(std::move(row));
  }

  const VerifyRow* worst_qfi = &rows.front();
  const VerifyRow* worst_eig = &rows.front();
  for (const auto& row : rows) {
    if (row.rel_error > worst_qfi->rel_error) worst_qfi = &row;
    if (row.eig_error > worst_eig->eig_error) worst_eig = &row;
  }
  const bool pass = worst_qfi->rel_error <= qfi_threshold &&
                    worst_eig->eig_error <= kEigenvalueThreshold;

  if (config.format == Format::csv) {
    os << "R,T,F_analytic,F_numeric,rel_error,eig_error,flags\n";
    for (const auto& row : rows) {
      os << fmt17(row.R) << ',' << fmt17(row.T) << ',' << fmt17(row.f_analytic)
         << ',' << fmt17(row.f_numeric) << ',' << fmt17(row.rel_error) << ','
         << fmt17(row.eig_error) << ',' << row.flags << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["alpha"] = json_alpha(config.alpha);
    j["thresholds"] = {{"qfi_relative", qfi_threshold},
                       {"eigenvalue", kEigenvalueThreshold}};
    auto& out_rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      out_rows.push_back({{"R", row.R},
                          {"T", row.T},
                          {"F_analytic", row.f_analytic},
                          {"F_numeric", row.f_numeric},
                          {"rel_error", json_number(row.rel_error)},
                          {"eig_error", json_number(row.eig_error)},
                          {"flags", row.flags}});
    }
    j["max_rel_error"] = json_number(worst_qfi->rel_error);
    j["max_eig_error"] = json_number(worst_eig->eig_error);
    j["pass"] = pass;
    os << j.dump() << '\n';
  }

  if (!pass) {
    err << "verification failed; worst offender R=" << fmt17(worst_qfi->R)
        << " rel_error=" << fmt17(worst_qfi->rel_error) << ", eigenvalue worst R="
        << fmt17(worst_eig->R) << " eig_error=" << fmt17(worst_eig->eig_error)
        << '\n';
    return kExitThresholdViolation;
  }
  return kExitOk;
}

int run_crossings(const RunConfig& config, std::ostream& os, std::ostream& err) {
  const double tolerance =
      config.tolerance > 0.0 ? config.tolerance : kDefaultRootTolerance;
  limits::CrossingReport report;
  try {
    report = limits::find_crossings(config.alpha, tolerance);
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumericFailure;
  }

  nlohmann::ordered_json j;
  j["alpha"] = json_alpha(config.alpha);
  j["tolerance"] = tolerance;
  const std::pair<const char*, const limits::Crossing*> named[] = {
      {"R_A", &report.hofmann},
      {"R_B", &report.heisenberg},
      {"R_C", &report.shot_noise}};
  for (const auto& [name, c] : named) {
    j[name] = c->present ? nlohmann::ordered_json(c->R)
                         : nlohmann::ordered_json(nullptr);
  }
  for (const auto& [name, c] : named) {
    j["residuals"][name] =
        c->present ? json_number(c->residual) : nlohmann::ordered_json(nullptr);
    j["brackets"][name] =
        c->present
            ? nlohmann::ordered_json({c->bracket_lo, c->bracket_hi})
            : nlohmann::ordered_json(nullptr);
    j["absent"][name] = !c->present;
  }
  os << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

std::vector<double> parse_r_spec(const std::string& spec) {
  if (spec.empty()) {
    throw std::invalid_argument("empty reflectivity spec");
  }
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first + 1);
    if (second == std::string::npos ||
        spec.find(':', second + 1) != std::string::npos) {
      throw std::invalid_argument("range spec must be start:stop:step");
    }
    const double start = parse_double(spec.substr(0, first));
    const double stop = parse_double(spec.substr(first + 1, second - first - 1));
    const double step = parse_double(spec.substr(second + 1));
    if (!(step > 0.0)) {
      throw std::invalid_argument("range step must be > 0");
    }
    if (stop < start) {
      throw std::invalid_argument("range stop must be >= start");
    }
    const long long count =
        static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long long i = 0; i < count; ++i) {
      grid.push_back(std::min(start + static_cast<double>(i) * step, stop));
    }
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = spec.find(',', pos);
      const std::string token =
          spec.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      grid.push_back(parse_double(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  for (double r : grid) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("reflectivity " + std::to_string(r) +
                                  " outside [0, 1]");
    }
  }
  return grid;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.truncation && *config.truncation < 1) {
    err << "config error: truncation must be >= 1\n";
    return kExitConfigError;
  }
  if (config.tolerance < 0.0) {
    err << "config error: tolerance must be > 0\n";
    return kExitConfigError;
  }
  if (config.max_dim < 2) {
    err << "config error: dimension cap must be >= 2\n";
    return kExitConfigError;
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!config.out_path.empty()) {
    file.open(config.out_path, std::ios::binary);
    if (!file) {
      err << "config error: cannot open output file " << config.out_path << '\n';
      return kExitConfigError;
    }
    os = &file;
  }

  try {
    switch (config.command) {
      case Command::sweep:
        return run_sweep(config, *os, err);
      case Command::verify:
        return run_verify(config, *os, err);
      case Command::crossings:
        return run_crossings(config, *os, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  err << "config error: unknown command\n";
  return kExitConfigError;
}

}  // namespace qfi::cli
