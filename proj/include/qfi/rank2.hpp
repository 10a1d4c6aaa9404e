#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qfi/errors.hpp"

// Closed-form eigenvalues and eigenvectors for 2x2 density matrices and for
// rank-2 operators expressed on a nonorthogonal two-state basis. Two
// independent routes are provided: orthogonalize-then-diagonalize and a
// direct solve of the non-Hermitian coefficient matrix; they must agree.

namespace qfi::rank2 {

using Complex = std::complex<double>;

inline constexpr double kDegeneracyTol = 1e-12;  // on 1 - 4 det
inline constexpr double kDetClampTol = 1e-12;    // negative-det clamp window
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPhaseFloor = 1e-14;  // |b + d p| below this: tau undefined
inline constexpr double kCollapseTol = 1e-12; // |p| >= 1 - this: basis collapse

/// rho = [[eta, xi e^{i tau}], [xi e^{-i tau}, 1 - eta]]; trace is 1 by
/// construction, physicality requires det = eta (1 - eta) - xi^2 >= 0.
class GeneralQubitDensity {
 public:
  GeneralQubitDensity(double eta, double xi, double tau);

  double eta() const { return eta_; }
  double xi() const { return xi_; }
  double tau() const { return tau_; }

  /// eta (1 - eta) - xi^2, clamped to 0 when within -1e-12 of zero.
  double det() const { return det_; }
  /// <sigma_3> = 2 eta - 1.
  double sigma3() const { return 2.0 * eta_ - 1.0; }

  Eigen::Matrix2cd matrix() const;

 private:
  double eta_;
  double xi_;
  double tau_;
  double det_;
};

/// Rank-<=2 operator a|Psi1><Psi1| + b|Psi1><Psi2| + b*|Psi2><Psi1| +
/// d|Psi2><Psi2| on unit-norm states with overlap p = <Psi1|Psi2>, |p| < 1.
/// Unit trace (a + d + 2 Re(b* p) = 1) is enforced at construction.
class NonorthogonalRank2 {
 public:
  NonorthogonalRank2(double a, double d, Complex b, Complex p);

  double a() const { return a_; }
  double d() const { return d_; }
  Complex b() const { return b_; }
  Complex p() const { return p_; }

  double trace() const;
  /// det of the orthogonalized matrix, (1 - |p|^2)(a d - |b|^2), clamped.
  double det() const { return det_; }

 private:
  double a_;
  double d_;
  Complex b_;
  Complex p_;
  double det_;
};

enum class Basis {
  orthonormal,    // the computational / Gram-Schmidt Phi basis
  nonorthogonal,  // the original Psi basis with Gram [[1, p], [p*, 1]]
};

/// Eigenvalues (lambda+ >= 1/2 >= lambda-) and eigenvector expansion
/// coefficients on the declared basis. Each vector's global phase is fixed by
/// making its largest-magnitude coefficient real positive.
struct SpectralPair {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  Basis basis = Basis::orthonormal;
  Eigen::Vector2cd coeffs_plus = Eigen::Vector2cd::Zero();
  Eigen::Vector2cd coeffs_minus = Eigen::Vector2cd::Zero();
};

/// Result of recasting a NonorthogonalRank2 on the orthonormal Phi basis:
/// the 2x2 density matrix plus the scalars that determine its spectrum.
struct OrthogonalizedForm {
  GeneralQubitDensity rho;
  double det = 0.0;     // (1 - |p|^2)(a d - |b|^2), clamped
  double sigma3 = 0.0;  // 1 - 2 d (1 - |p|^2)
  // |b + d p| < kPhaseFloor: off-diagonal vanishes, tau set to 0 by
  // convention.
  bool phase_undefined = false;
};

/// Both-bases spectral solution of a nonorthogonal rank-2 operator.
struct NonorthogonalEig {
  OrthogonalizedForm ortho;
  SpectralPair phi;  // coefficients on the Gram-Schmidt basis
  SpectralPair psi;  // coefficients on the original nonorthogonal basis
};

namespace detail {

struct Rank2Scalars {
  double s;  // sqrt(1 - 4 det)
  double lambda_plus;
  double lambda_minus;
  double v_plus;
  double v_minus;
};

/// lambda+- = (1 +- s)/2 and v+- = sqrt((s +- sigma3)/(2 s)).
/// Throws DegenerateSpectrum when 1 - 4 det <= kDegeneracyTol.
Rank2Scalars spectral_scalars(double det, double sigma3);

/// Multiplies by a unit phase so the largest-magnitude coefficient is real
/// positive (ties broken toward index 0).
Eigen::Vector2cd canonical_phase(Eigen::Vector2cd v);

}  // namespace detail

/// Closed-form spectral decomposition of a 2x2 density matrix.
SpectralPair eig_general_qubit(const GeneralQubitDensity& rho);

/// Gram-Schmidt recast of the nonorthogonal operator onto an orthonormal
/// basis Phi1 = Psi1, Phi2 = (Psi2 - p Psi1)/sqrt(1 - |p|^2).
OrthogonalizedForm orthogonalize(const NonorthogonalRank2& op);

/// Orthogonalize, diagonalize in closed form, and transform the eigenvectors
/// back; returns coefficients on both bases.
NonorthogonalEig eig_nonorthogonal(const NonorthogonalRank2& op);

/// Independent route: solves the non-Hermitian 2x2 coefficient matrix
/// [[a + b p*, a p + b], [b* + d p*, b* p + d]] directly and normalizes under
/// the Gram matrix. Must agree with eig_nonorthogonal.
SpectralPair eig_nonorthogonal_direct(const NonorthogonalRank2& op);

}  // namespace qfi::rank2
