#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qfi/errors.hpp"

// Quantum Fisher information for spectral decompositions: the
// unitary-generator formula F = 4[sum_i p_i (dH_i)^2 -
// sum_{i!=j} 2 p_i p_j/(p_i+p_j) |H_ij|^2], the pure-state special case, a
// finite-difference SLD-sum oracle, and the Cramer-Rao bound.

namespace qfi {

inline constexpr double kSupportCutoff = 1e-12;
inline constexpr double kOrthonormalTol = 1e-10;
inline constexpr double kWeightSumTol = 1e-10;
inline constexpr double kDefaultFdStep = 1e-5;

struct SpectralComponent {
  double weight = 0.0;
  Eigen::VectorXcd ket;
};

/// Support of a density operator: weights in (0, 1] sorted descending with
/// sum <= 1 + 1e-10, kets pairwise orthonormal within 1e-10. Weights may sum
/// to less than 1 when negligible eigenvalues were truncated away.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(std::vector<SpectralComponent> components);

  const std::vector<SpectralComponent>& components() const {
    return components_;
  }
  Eigen::Index dim() const { return components_.front().ket.size(); }
  std::size_t size() const { return components_.size(); }

 private:
  std::vector<SpectralComponent> components_;
};

/// Per-eigenstate variance (dH_i)^2 and transition probabilities |H_ij|^2 of
/// a Hermitian generator.
struct GeneratorStats {
  std::vector<double> variances;  // clamped at zero
  Eigen::MatrixXd transitions;    // symmetric, zero diagonal
};

struct QfiResult {
  double value = 0.0;
  double classical_term = 0.0;  // zero for phi-independent weights
  double mean_variance_term = 0.0;
  double transition_term = 0.0;
};

GeneratorStats generator_stats(const SpectralDecomposition& decomp,
                               const Eigen::MatrixXcd& generator);

/// QFI of the family e^{-i phi H} rho e^{i phi H} with phi-independent
/// weights; the classical term vanishes.
QfiResult qfi_unitary(const SpectralDecomposition& decomp,
                      const Eigen::MatrixXcd& generator);

/// 4 (<H^2> - <H>^2) for a normalized ket.
double qfi_pure(const Eigen::VectorXcd& ket, const Eigen::MatrixXcd& generator);

struct FiniteDifferenceOptions {
  double step = kDefaultFdStep;
  bool richardson = false;  // 4th-order refinement of d(rho)/d(phi)
};

/// Numerical oracle: diagonalizes rho(phi), approximates the derivative by a
/// central difference, and sums 2 |<k|drho|l>|^2/(p_k + p_l) over pairs with
/// p_k + p_l above the support cutoff.
double qfi_finite_difference(
    const std::function<Eigen::MatrixXcd(double)>& rho_family, double phi,
    const FiniteDifferenceOptions& options = {});

/// var(phi_hat) >= 1/(nu F) for nu repeated experiments.
double cramer_rao_bound(double qfi, long repetitions);

}  // namespace qfi
