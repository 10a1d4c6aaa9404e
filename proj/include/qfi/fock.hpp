#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "qfi/errors.hpp"
#include "qfi/qfi_core.hpp"

// Truncated Fock-space machinery for the lossy entangled-coherent-state
// interferometer: coherent states, number operators, beam splitters acting on
// coherent labels, loss via fictitious beam splitters and partial trace. This
// is the independent numerical oracle the closed forms are checked against.

namespace qfi::fock {

using Complex = std::complex<double>;

inline constexpr long long kDefaultDimensionCap = 1'000'000;
inline constexpr double kDefaultTruncationLoss = 1e-10;
inline constexpr double kAdaptiveTailBound = 1e-12;
inline constexpr int kMinimumNMax = 15;

/// Per-mode truncation n_max and mode count; total dimension
/// (n_max + 1)^modes is bounded by a configurable cap.
class FockSpace {
 public:
  FockSpace(int n_max, int modes, long long dimension_cap = kDefaultDimensionCap);

  int n_max() const { return n_max_; }
  int modes() const { return modes_; }
  long long levels() const { return n_max_ + 1; }
  long long dim() const { return dim_; }
  long long dimension_cap() const { return cap_; }

  /// Flat index of an occupation tuple; mode 0 is the slowest axis
  /// (row-major flattening, occupation ascending within each mode).
  long long index(std::span<const int> occupation) const;
  /// Occupation of one mode at a flat index.
  int occupation(long long index, int mode) const;

  bool operator==(const FockSpace& other) const {
    return n_max_ == other.n_max_ && modes_ == other.modes_;
  }

 private:
  int n_max_;
  int modes_;
  long long cap_;
  long long dim_;
};

struct FockVector {
  FockSpace space;
  Eigen::VectorXcd amplitudes;
  double truncation_loss = 0.0;  // tail mass discarded before renormalization
};

struct DenseOperator {
  FockSpace space;
  Eigen::MatrixXcd matrix;
};

/// Smallest n with Poisson(|alpha|^2) tail mass below tail_bound, floored at
/// the paper-scale minimum of 15.
int adaptive_n_max(Complex alpha, double tail_bound = kAdaptiveTailBound,
                   int minimum = kMinimumNMax);

/// Single-mode coherent state c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!),
/// renormalized after truncation. Throws TruncationTooLossy when the
/// discarded tail mass exceeds max_loss.
FockVector coherent_ket(Complex alpha, const FockSpace& space,
                        double max_loss = kDefaultTruncationLoss);

/// Product of per-mode coherent states, one amplitude per mode.
FockVector product_coherent(const FockSpace& space,
                            std::span<const Complex> alphas,
                            double max_loss = kDefaultTruncationLoss);

/// N_alpha [|alpha>|0> + |0>|alpha>] with N_alpha = 1/sqrt(2(1+e^{-|alpha|^2})).
FockVector ecs_ket(Complex alpha, const FockSpace& space,
                   double max_loss = kDefaultTruncationLoss);

/// Beam-splitter action on coherent labels:
/// (a1, a2) -> (a1 sqrt(T) + a2 sqrt(R), a1 sqrt(R) - a2 sqrt(T)), R = 1 - T.
std::pair<Complex, Complex> beam_splitter_coherent(Complex alpha1,
                                                   Complex alpha2, double T);

/// Reduced state of the ECS after loss, assembled directly:
/// N^2 [|a',0><a',0| + e^{-|b'|^2}(|a',0><0,a'| + |0,a'><a',0|)
///      + |0,a'><0,a'|], a' = alpha sqrt(T), b' = alpha sqrt(1-T).
DenseOperator build_rho12_direct(Complex alpha, double T,
                                 const FockSpace& space,
                                 double max_loss = kDefaultTruncationLoss);

/// Same state via the four-mode purification: fictitious beam splitters
/// couple each arm to a vacuum environment mode, then modes 3 and 4 are
/// traced out. Must agree entrywise with build_rho12_direct.
DenseOperator build_rho12_via_environment(
    Complex alpha, double T, const FockSpace& four_mode_space,
    double max_loss = kDefaultTruncationLoss);

/// Diagonal operator with entries n_mode^power. Dense; meant for one- and
/// two-mode spaces.
DenseOperator number_operator(const FockSpace& space, int mode, int power = 1);

/// Numerical spectral decomposition of a Hermitian operator, keeping
/// eigenvalues above the support cutoff. Rows/columns that are exactly zero
/// are deflated before the dense solve; they carry only zero eigenvalues.
SpectralDecomposition support_decomposition(const DenseOperator& rho,
                                            double cutoff = kSupportCutoff);

/// Dense-oracle QFI of the lossy ECS: diagonalizes the reduced state and
/// applies the unitary-generator formula with H = n_2 (mode index 1).
double numeric_qfi_lossy(Complex alpha, double T, const FockSpace& space,
                         double max_loss = kDefaultTruncationLoss);

/// phi -> U rho U^dagger for U = exp(-i phi H) with a diagonal generator.
std::function<Eigen::MatrixXcd(double)> rotated_state_family(
    const DenseOperator& rho, const DenseOperator& generator);

/// Debug dump: JSON with n_max, mode count and row-major [re, im] entries.
void dump_operator_json(const DenseOperator& op, std::ostream& os);
DenseOperator load_operator_json(std::istream& is,
                                 long long dimension_cap = kDefaultDimensionCap);

}  // namespace qfi::fock
