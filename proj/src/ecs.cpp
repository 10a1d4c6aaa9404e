#include "qfi/ecs.hpp"

#include <cmath>
#include <string>

namespace qfi::ecs {

namespace {

constexpr double kInternalAgreementTol = 1e-10;  // assembled vs closed form

double assemble_two_component(const EigenTilde& et,
                              const VariancesAndTransition& vt) {
  return 4.0 * (et.lambda_plus * vt.var_plus + et.lambda_minus * vt.var_minus -
                4.0 * et.lambda_plus * et.lambda_minus * vt.transition);
}

}  // namespace

EcsScenario::EcsScenario(Complex alpha_in, double T_in)
    : alpha(alpha_in), T(T_in) {
  if (!(T >= 0.0 && T <= 1.0)) {
    throw std::invalid_argument("transmission T must be in [0, 1]");
  }
  R = 1.0 - T;
  alpha_prime = alpha * std::sqrt(T);
  beta_prime = alpha * std::sqrt(R);
  const double mean = std::norm(alpha);
  n_alpha = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-mean)));
  n_bar = 2.0 * n_alpha * n_alpha * mean;
}

EigenTilde eigen_tilde(const EcsScenario& s) {
  if (std::norm(s.alpha) == 0.0) {
    throw DegenerateLimit("alpha = 0: the ECS degenerates to vacuum");
  }
  const double ea = std::exp(-std::norm(s.alpha));
  const double e2ap = std::exp(-2.0 * std::norm(s.alpha_prime));
  const double e2bp = std::exp(-2.0 * std::norm(s.beta_prime));

  const double root = std::sqrt(2.0 * ea + e2ap + e2bp);
  const double half_split = root / (2.0 + 2.0 * ea);

  // v+- via the general 2x2 scalars: sigma3 = 1 - 2 N^2 (1 - e^{-2|a'|^2}).
  const double n_sq = s.n_alpha * s.n_alpha;
  const double sigma3 = 1.0 - 2.0 * n_sq * (1.0 - e2ap);
  const double sref = 2.0 * half_split;  // sqrt(1 - 4 det)
  const double vp = std::sqrt(std::max(0.0, (sref + sigma3) / (2.0 * sref)));
  const double vm = std::sqrt(std::max(0.0, (sref - sigma3) / (2.0 * sref)));

  return {0.5 + half_split, 0.5 - half_split, vp, vm};
}

VariancesAndTransition variances_and_transition(const EcsScenario& s) {
  if (std::norm(s.alpha) == 0.0) {
    throw DegenerateLimit("alpha = 0: the ECS degenerates to vacuum");
  }
  const double m = std::norm(s.alpha_prime);  // |alpha'|^2
  const double p = std::exp(-m);
  // v-^2/(1-p^2) = 1/(2(1+p)) and v+^2/(1-p^2) = 1/(2(1-p)); the second is
  // evaluated through expm1 to avoid cancellation at small |alpha'|^2.
  const double a = 1.0 / (2.0 * (1.0 + p));
  const double b = 1.0 / (-2.0 * std::expm1(-m));

  VariancesAndTransition out;
  out.var_plus = a * (m * m + m - a * m * m);
  out.var_minus = b * (m * m + m - b * m * m);
  out.transition = a * b * m * m;
  return out;
}

rank2::NonorthogonalRank2 rank2_form(const EcsScenario& s) {
  const double n_sq = s.n_alpha * s.n_alpha;
  return {n_sq, n_sq, n_sq * std::exp(-std::norm(s.beta_prime)),
          std::exp(-std::norm(s.alpha_prime))};
}

EcsQfiBreakdown qfi_analytic(const EcsScenario& s) {
  EcsQfiBreakdown out;
  if (std::norm(s.alpha) == 0.0) {
    out.flag = EcsFlag::degenerate_alpha;
    return out;
  }
  if (s.T == 0.0) {
    out.flag = EcsFlag::full_loss;
    out.lambda_plus = 1.0;
    out.v_plus = 1.0;
    return out;
  }

  const EigenTilde et = eigen_tilde(s);
  const VariancesAndTransition vt = variances_and_transition(s);
  out.lambda_plus = et.lambda_plus;
  out.lambda_minus = et.lambda_minus;
  out.v_plus = et.v_plus;
  out.v_minus = et.v_minus;
  out.var_plus = vt.var_plus;
  out.var_minus = vt.var_minus;
  out.transition = vt.transition;

  double closed;
  if (s.T == 1.0) {
    closed = lossless_qfi(s.alpha);
  } else {
    const double mean = std::norm(s.alpha);
    const double loss_ratio =
        std::expm1(-2.0 * mean * s.R) / std::expm1(-2.0 * mean * s.T);
    closed = s.n_bar * s.T *
             (2.0 + (2.0 * mean - s.n_bar - s.n_bar * loss_ratio) * s.T);
  }

  const double assembled = assemble_two_component(et, vt);
  if (std::abs(assembled - closed) >
      kInternalAgreementTol * std::max(1.0, std::abs(closed))) {
    throw Error("assembled QFI " + std::to_string(assembled) +
                " disagrees with the closed form " + std::to_string(closed));
  }
  out.F = closed;
  return out;
}

double lossless_qfi(Complex alpha) {
  const double mean = std::norm(alpha);
  if (mean == 0.0) {
    throw DegenerateLimit("alpha = 0: the ECS degenerates to vacuum");
  }
  const double n_bar = mean / (1.0 + std::exp(-mean));
  const double f = n_bar * (2.0 + 2.0 * mean - n_bar);

  // Identities of the lossless case; both are algebraic consequences.
  const double nsq_bar = (1.0 + mean) * n_bar;
  if (std::abs(f - (2.0 * nsq_bar - n_bar * n_bar)) > 1e-12 * f ||
      f < n_bar * n_bar + 2.0 * n_bar - 1e-12 * f) {
    throw Error("lossless QFI identities violated");
  }
  return f;
}

}  // namespace qfi::ecs
