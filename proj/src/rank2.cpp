#include "qfi/rank2.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qfi::rank2 {

namespace {

double wrap_angle(double tau) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  tau = std::fmod(tau, two_pi);
  if (tau < 0.0) tau += two_pi;
  return tau;
}

double clamp_det(double det, const char* what) {
  if (det < -kDetClampTol) {
    throw NotPhysical(std::string(what) + " has determinant " +
                      std::to_string(det) + " below -1e-12");
  }
  return det < 0.0 ? 0.0 : det;
}

}  // namespace

GeneralQubitDensity::GeneralQubitDensity(double eta, double xi, double tau)
    : eta_(eta), xi_(xi), tau_(wrap_angle(tau)) {
  if (!(xi >= 0.0)) {
    throw std::invalid_argument("off-diagonal magnitude xi must be >= 0");
  }
  det_ = clamp_det(eta_ * (1.0 - eta_) - xi_ * xi_, "2x2 density matrix");
}

Eigen::Matrix2cd GeneralQubitDensity::matrix() const {
  const Complex off = xi_ * std::exp(Complex(0.0, tau_));
  Eigen::Matrix2cd m;
  m << Complex(eta_, 0.0), off, std::conj(off), Complex(1.0 - eta_, 0.0);
  return m;
}

NonorthogonalRank2::NonorthogonalRank2(double a, double d, Complex b, Complex p)
    : a_(a), d_(d), b_(b), p_(p) {
  if (!(a >= 0.0) || !(d >= 0.0)) {
    throw std::invalid_argument("diagonal weights a, d must be >= 0");
  }
  if (!(std::abs(p) < 1.0)) {
    throw std::invalid_argument("basis overlap |p| must be < 1");
  }
  if (std::abs(trace() - 1.0) > kTraceTol) {
    throw std::invalid_argument("rank-2 operator trace " +
                                std::to_string(trace()) + " is not 1");
  }
  const double q = 1.0 - std::norm(p_);
  det_ = clamp_det(q * (a_ * d_ - std::norm(b_)), "rank-2 operator");
}

double NonorthogonalRank2::trace() const {
  return a_ + d_ + 2.0 * std::real(std::conj(b_) * p_);
}

namespace detail {

Rank2Scalars spectral_scalars(double det, double sigma3) {
  const double s2 = 1.0 - 4.0 * det;
  if (s2 <= kDegeneracyTol) {
    throw DegenerateSpectrum("1 - 4 det = " + std::to_string(s2) +
                             " is within the degeneracy tolerance");
  }
  const double s = std::sqrt(s2);
  // s >= |sigma3| holds exactly (s^2 = sigma3^2 + 4 xi^2); guard roundoff.
  const double up = std::max(0.0, (s + sigma3) / (2.0 * s));
  const double um = std::max(0.0, (s - sigma3) / (2.0 * s));
  return {s, (1.0 + s) / 2.0, (1.0 - s) / 2.0, std::sqrt(up), std::sqrt(um)};
}

Eigen::Vector2cd canonical_phase(Eigen::Vector2cd v) {
  const int k = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  const double mag = std::abs(v(k));
  if (mag == 0.0) return v;
  v *= std::conj(v(k)) / mag;
  return v;
}

}  // namespace detail

SpectralPair eig_general_qubit(const GeneralQubitDensity& rho) {
  const auto sc = detail::spectral_scalars(rho.det(), rho.sigma3());
  const Complex phase = std::exp(Complex(0.0, rho.tau()));

  SpectralPair out;
  out.lambda_plus = sc.lambda_plus;
  out.lambda_minus = sc.lambda_minus;
  out.basis = Basis::orthonormal;
  out.coeffs_plus =
      detail::canonical_phase({sc.v_plus * phase, Complex(sc.v_minus, 0.0)});
  out.coeffs_minus =
      detail::canonical_phase({-sc.v_minus * phase, Complex(sc.v_plus, 0.0)});
  return out;
}

OrthogonalizedForm orthogonalize(const NonorthogonalRank2& op) {
  const Complex p = op.p();
  if (std::abs(p) >= 1.0 - kCollapseTol) {
    throw BasisCollapse("|<Psi1|Psi2>| = " + std::to_string(std::abs(p)) +
                        " leaves no second basis direction");
  }
  const double q = 1.0 - std::norm(p);
  const double sqrt_q = std::sqrt(q);

  const double m11 =
      op.a() + 2.0 * std::real(op.b() * std::conj(p)) + op.d() * std::norm(p);
  const Complex off_unscaled = op.b() + op.d() * p;

  bool phase_undefined = false;
  double tau = 0.0;
  if (std::abs(off_unscaled) < kPhaseFloor) {
    phase_undefined = true;
  } else {
    tau = wrap_angle(std::arg(off_unscaled));
  }

  OrthogonalizedForm out{
      GeneralQubitDensity(m11, std::abs(off_unscaled) * sqrt_q, tau),
      op.det(), 1.0 - 2.0 * op.d() * q, phase_undefined};
  return out;
}

NonorthogonalEig eig_nonorthogonal(const NonorthogonalRank2& op) {
  NonorthogonalEig out{orthogonalize(op), {}, {}};
  out.phi = eig_general_qubit(out.ortho.rho);

  // Back-transform |lambda> = c1|Phi1> + c2|Phi2> through
  // |Phi2> = (|Psi2> - p|Psi1>)/sqrt(1 - |p|^2).
  const auto sc = detail::spectral_scalars(out.ortho.det, out.ortho.sigma3);
  const Complex p = op.p();
  const double rq = 1.0 / std::sqrt(1.0 - std::norm(p));
  const Complex phase = std::exp(Complex(0.0, out.ortho.rho.tau()));

  out.psi.lambda_plus = sc.lambda_plus;
  out.psi.lambda_minus = sc.lambda_minus;
  out.psi.basis = Basis::nonorthogonal;
  out.psi.coeffs_plus = detail::canonical_phase(
      {sc.v_plus * phase - p * sc.v_minus * rq, Complex(sc.v_minus * rq, 0.0)});
  out.psi.coeffs_minus = detail::canonical_phase(
      {-sc.v_minus * phase - p * sc.v_plus * rq, Complex(sc.v_plus * rq, 0.0)});
  return out;
}

SpectralPair eig_nonorthogonal_direct(const NonorthogonalRank2& op) {
  const Complex p = op.p();
  if (std::abs(p) >= 1.0 - kCollapseTol) {
    throw BasisCollapse("|<Psi1|Psi2>| = " + std::to_string(std::abs(p)) +
                        " leaves no second basis direction");
  }

  // Coefficient matrix of the eigenproblem posed on the Psi basis itself.
  const Complex pc = std::conj(p);
  const Complex k00 = op.a() + op.b() * pc;
  const Complex k01 = op.a() * p + op.b();
  const Complex k10 = std::conj(op.b()) + op.d() * pc;
  const Complex k11 = std::conj(op.b()) * p + op.d();

  const double tr = std::real(k00 + k11);
  const double det = std::real(k00 * k11 - k01 * k10);
  const double disc = tr * tr - 4.0 * det;
  if (disc <= kDegeneracyTol) {
    throw DegenerateSpectrum("coefficient-matrix discriminant " +
                             std::to_string(disc) +
                             " is within the degeneracy tolerance");
  }
  const double s = std::sqrt(disc);

  SpectralPair out;
  out.lambda_plus = (tr + s) / 2.0;
  out.lambda_minus = (tr - s) / 2.0;
  out.basis = Basis::nonorthogonal;

  const auto eigenvector = [&](double lambda) {
    // (K - lambda) c = 0: candidates from either row, pick the better
    // conditioned one.
    const Eigen::Vector2cd from_row0{k01, lambda - k00};
    const Eigen::Vector2cd from_row1{lambda - k11, k10};
    Eigen::Vector2cd c =
        from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
    // Normalize under the Gram matrix [[1, p], [p*, 1]]:
    // |c1|^2 + |c2|^2 + 2 Re(p c1* c2) = 1.
    const double gram_norm_sq =
        c.squaredNorm() + 2.0 * std::real(p * std::conj(c(0)) * c(1));
    c /= std::sqrt(gram_norm_sq);
    return detail::canonical_phase(c);
  };
  out.coeffs_plus = eigenvector(out.lambda_plus);
  out.coeffs_minus = eigenvector(out.lambda_minus);
  return out;
}

}  // namespace qfi::rank2
