#include "qfi/limits.hpp"

#include <algorithm>
#include <cmath>

namespace qfi::limits {

namespace {

constexpr double kScanStep = 0.01;
constexpr double kBisectionFloor = 1e-12;  // bracket width target
constexpr int kMaxBisections = 200;

double qfi_at_reflectivity(Complex alpha, double r) {
  return ecs::qfi_analytic(ecs::EcsScenario(alpha, 1.0 - r)).F;
}

Crossing solve_crossing(Complex alpha, double limit,
                        std::span<const double> scan_r,
                        std::span<const double> scan_f, double tolerance) {
  Crossing out;
  // F decreases from the lossless value to 0; a crossing needs F(0) > limit.
  if (scan_f.front() <= limit) return out;

  std::size_t k = 0;
  while (k + 1 < scan_f.size() && scan_f[k + 1] - limit > 0.0) ++k;
  if (k + 1 == scan_f.size()) return out;  // never reaches the limit

  double lo = scan_r[k];
  double hi = scan_r[k + 1];
  const double width_target = std::max(std::min(tolerance, kBisectionFloor),
                                       4.0 * std::numeric_limits<double>::epsilon());
  for (int i = 0; i < kMaxBisections && hi - lo > width_target; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (qfi_at_reflectivity(alpha, mid) - limit > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.present = true;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  out.R = 0.5 * (lo + hi);
  out.residual = std::abs(qfi_at_reflectivity(alpha, out.R) - limit);
  return out;
}

}  // namespace

PrecisionLimits limits_for(Complex alpha) {
  const double mean = std::norm(alpha);
  if (mean == 0.0) {
    throw DegenerateLimit("alpha = 0: photon-number limits are all zero");
  }
  const double n_bar = mean / (1.0 + std::exp(-mean));
  return {n_bar, n_bar * n_bar, (1.0 + mean) * n_bar};
}

CrossingReport find_crossings(Complex alpha, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be > 0");
  }
  if (std::norm(alpha) == 0.0) {
    return {};  // F vanishes identically; every crossing is absent
  }
  const PrecisionLimits lim = limits_for(alpha);

  // One shared coarse scan of F over [0, 1].
  std::vector<double> scan_r;
  std::vector<double> scan_f;
  for (int i = 0;; ++i) {
    const double r = std::min(i * kScanStep, 1.0);
    scan_r.push_back(r);
    scan_f.push_back(qfi_at_reflectivity(alpha, r));
    if (r >= 1.0) break;
  }

  CrossingReport report;
  report.hofmann = solve_crossing(alpha, lim.hofmann, scan_r, scan_f, tolerance);
  report.heisenberg =
      solve_crossing(alpha, lim.heisenberg, scan_r, scan_f, tolerance);
  report.shot_noise =
      solve_crossing(alpha, lim.shot_noise, scan_r, scan_f, tolerance);
  return report;
}

std::vector<SweepRow> sweep_qfi(Complex alpha, std::span<const double> r_grid) {
  std::vector<double> grid(r_grid.begin(), r_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double r : grid) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("reflectivity grid must lie in [0, 1]");
    }
  }

  PrecisionLimits lim{};
  bool degenerate = std::norm(alpha) == 0.0;
  if (!degenerate) lim = limits_for(alpha);

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double r : grid) {
    SweepRow row;
    row.R = r;
    row.T = 1.0 - r;
    row.limits = lim;
    if (degenerate) {
      row.flags = "degenerate_alpha";
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const auto breakdown = ecs::qfi_analytic(ecs::EcsScenario(alpha, row.T));
      row.F = breakdown.F;
      if (breakdown.flag == ecs::EcsFlag::full_loss) row.flags = "full_loss";
    } catch (const Error& e) {
      row.flags = std::string("error:") + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qfi::limits
