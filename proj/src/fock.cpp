#include "qfi/fock.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace qfi::fock {

FockSpace::FockSpace(int n_max, int modes, long long dimension_cap)
    : n_max_(n_max), modes_(modes), cap_(dimension_cap) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (modes != 1 && modes != 2 && modes != 4) {
    throw std::invalid_argument("mode count must be 1, 2 or 4");
  }
  dim_ = 1;
  for (int m = 0; m < modes_; ++m) {
    dim_ *= levels();
    if (dim_ > cap_) {
      throw DimensionCap("Fock dimension (n_max+1)^modes = " +
                         std::to_string(levels()) + "^" +
                         std::to_string(modes_) + " exceeds the cap " +
                         std::to_string(cap_));
    }
  }
}

long long FockSpace::index(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) {
    throw DimensionMismatch("occupation tuple has wrong mode count");
  }
  long long idx = 0;
  for (int n : occupation) {
    if (n < 0 || n > n_max_) {
      throw std::invalid_argument("occupation outside [0, n_max]");
    }
    idx = idx * levels() + n;
  }
  return idx;
}

int FockSpace::occupation(long long index, int mode) const {
  long long stride = 1;
  for (int m = modes_ - 1; m > mode; --m) stride *= levels();
  return static_cast<int>((index / stride) % levels());
}

int adaptive_n_max(Complex alpha, double tail_bound, int minimum) {
  const double mean = std::norm(alpha);
  double pmf = std::exp(-mean);
  double cumulative = pmf;
  int n = 0;
  while (1.0 - cumulative >= tail_bound && n < 100000) {
    ++n;
    pmf *= mean / n;
    cumulative += pmf;
  }
  return std::max(n, minimum);
}

FockVector coherent_ket(Complex alpha, const FockSpace& space,
                        double max_loss) {
  if (space.modes() != 1) {
    throw DimensionMismatch("coherent_ket builds single-mode states");
  }
  Eigen::VectorXcd amps(space.levels());
  Complex c = std::exp(-std::norm(alpha) / 2.0);
  amps(0) = c;
  for (int n = 1; n <= space.n_max(); ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    amps(n) = c;
  }
  const double kept = amps.squaredNorm();
  const double loss = std::max(0.0, 1.0 - kept);
  if (loss > max_loss) {
    throw TruncationTooLossy(
        "coherent tail mass " + std::to_string(loss) + " at n_max " +
        std::to_string(space.n_max()) + " exceeds " + std::to_string(max_loss) +
        "; raise n_max");
  }
  amps /= std::sqrt(kept);
  return {space, std::move(amps), loss};
}

FockVector product_coherent(const FockSpace& space,
                            std::span<const Complex> alphas, double max_loss) {
  if (static_cast<int>(alphas.size()) != space.modes()) {
    throw DimensionMismatch("one coherent amplitude per mode required");
  }
  const FockSpace mode_space(space.n_max(), 1, space.dimension_cap());
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  double kept = 1.0;
  for (const Complex& alpha : alphas) {
    const FockVector factor = coherent_ket(alpha, mode_space, max_loss);
    kept *= 1.0 - factor.truncation_loss;
    // Kronecker step keeps mode 0 slowest, matching FockSpace::index.
    Eigen::VectorXcd next(amps.size() * space.levels());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next.segment(i * space.levels(), space.levels()) =
          amps(i) * factor.amplitudes;
    }
    amps = std::move(next);
  }
  return {space, std::move(amps), 1.0 - kept};
}

FockVector ecs_ket(Complex alpha, const FockSpace& space, double max_loss) {
  if (space.modes() != 2) {
    throw DimensionMismatch("the ECS lives on a two-mode space");
  }
  const double n_alpha = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-std::norm(alpha))));
  const Complex branch1[] = {alpha, Complex(0.0)};
  const Complex branch2[] = {Complex(0.0), alpha};
  const FockVector a0 = product_coherent(space, branch1, max_loss);
  const FockVector v0 = product_coherent(space, branch2, max_loss);

  FockVector out{space, n_alpha * (a0.amplitudes + v0.amplitudes),
                 1.0 - (1.0 - a0.truncation_loss) * (1.0 - v0.truncation_loss)};
  const double norm = out.amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw TruncationTooLossy("ECS norm " + std::to_string(norm) +
                             " deviates from 1; truncation inadequate");
  }
  return out;
}

std::pair<Complex, Complex> beam_splitter_coherent(Complex alpha1,
                                                   Complex alpha2, double T) {
  if (!(T >= 0.0 && T <= 1.0)) {
    throw std::invalid_argument("transmission T must be in [0, 1]");
  }
  const double st = std::sqrt(T);
  const double sr = std::sqrt(1.0 - T);
  return {alpha1 * st + alpha2 * sr, alpha1 * sr - alpha2 * st};
}

DenseOperator build_rho12_direct(Complex alpha, double T,
                                 const FockSpace& space, double max_loss) {
  if (space.modes() != 2) {
    throw DimensionMismatch("the reduced state lives on a two-mode space");
  }
  const auto [alpha_prime, beta_prime] = beam_splitter_coherent(alpha, 0.0, T);
  const double n_sq = 1.0 / (2.0 * (1.0 + std::exp(-std::norm(alpha))));
  const double cross = std::exp(-std::norm(beta_prime));

  const Complex branch1[] = {alpha_prime, Complex(0.0)};
  const Complex branch2[] = {Complex(0.0), alpha_prime};
  const Eigen::VectorXcd u = product_coherent(space, branch1, max_loss).amplitudes;
  const Eigen::VectorXcd w = product_coherent(space, branch2, max_loss).amplitudes;

  DenseOperator out{space,
                    n_sq * (u * u.adjoint() + cross * (u * w.adjoint()) +
                            cross * (w * u.adjoint()) + w * w.adjoint())};
  const double trace = std::real(out.matrix.trace());
  if (std::abs(trace - 1.0) > 1e-10) {
    throw TruncationTooLossy("reduced-state trace " + std::to_string(trace) +
                             " deviates from 1; truncation inadequate");
  }
  return out;
}

DenseOperator build_rho12_via_environment(Complex alpha, double T,
                                          const FockSpace& four_mode_space,
                                          double max_loss) {
  if (four_mode_space.modes() != 4) {
    throw DimensionMismatch("the purification lives on a four-mode space");
  }
  // Each ECS branch is a product of coherent states, so the fictitious beam
  // splitters act on the coherent labels: mode 1 couples to environment mode
  // 3 and mode 2 to mode 4.
  const auto [alpha_prime, beta_prime] = beam_splitter_coherent(alpha, 0.0, T);
  const double n_alpha = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-std::norm(alpha))));

  const Complex branch1[] = {alpha_prime, Complex(0.0), beta_prime, Complex(0.0)};
  const Complex branch2[] = {Complex(0.0), alpha_prime, Complex(0.0), beta_prime};
  const Eigen::VectorXcd psi =
      n_alpha * (product_coherent(four_mode_space, branch1, max_loss).amplitudes +
                 product_coherent(four_mode_space, branch2, max_loss).amplitudes);

  // Trace out modes 3 and 4: with mode-major flattening the state reshapes
  // row-major to A[(n1 n2), (n3 n4)] and rho_12 = A A^dagger.
  const long long d2 = four_mode_space.levels() * four_mode_space.levels();
  using RowMajorMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic,
                                                     Eigen::Dynamic, Eigen::RowMajor>>;
  const RowMajorMap a(psi.data(), d2, d2);

  const FockSpace reduced(four_mode_space.n_max(), 2,
                          four_mode_space.dimension_cap());
  return {reduced, a * a.adjoint()};
}

DenseOperator number_operator(const FockSpace& space, int mode, int power) {
  if (mode < 0 || mode >= space.modes()) {
    throw std::invalid_argument("mode index outside space");
  }
  if (power < 1) throw std::invalid_argument("power must be >= 1");
  Eigen::VectorXcd diag(space.dim());
  for (long long i = 0; i < space.dim(); ++i) {
    diag(i) = std::pow(static_cast<double>(space.occupation(i, mode)), power);
  }
  return {space, diag.asDiagonal()};
}

SpectralDecomposition support_decomposition(const DenseOperator& rho,
                                            double cutoff) {
  const Eigen::MatrixXcd& m = rho.matrix;
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("operator is not square");
  }
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm())) {
    throw NonHermitianInput("operator is not Hermitian within 1e-10");
  }

  // Exactly-zero rows carry only zero eigenvalues; deflate them before the
  // dense solve.
  std::vector<Eigen::Index> live;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m.row(i).cwiseAbs().maxCoeff() > 0.0) live.push_back(i);
  }
  if (live.empty()) {
    throw std::invalid_argument("operator is identically zero");
  }
  Eigen::MatrixXcd block(live.size(), live.size());
  for (std::size_t r = 0; r < live.size(); ++r) {
    for (std::size_t c = 0; c < live.size(); ++c) {
      block(r, c) = m(live[r], live[c]);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
  if (es.info() != Eigen::Success) {
    throw Error("dense eigendecomposition failed");
  }

  std::vector<SpectralComponent> comps;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double weight = es.eigenvalues()(k);
    if (weight < cutoff) continue;
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(m.rows());
    for (std::size_t r = 0; r < live.size(); ++r) {
      ket(live[r]) = es.eigenvectors()(r, k);
    }
    comps.push_back({std::min(weight, 1.0), std::move(ket)});
  }
  return SpectralDecomposition(std::move(comps));
}

double numeric_qfi_lossy(Complex alpha, double T, const FockSpace& space,
                         double max_loss) {
  const DenseOperator rho = build_rho12_direct(alpha, T, space, max_loss);
  const DenseOperator h = number_operator(space, 1);
  return qfi_unitary(support_decomposition(rho), h.matrix).value;
}

std::function<Eigen::MatrixXcd(double)> rotated_state_family(
    const DenseOperator& rho, const DenseOperator& generator) {
  if (!(rho.space == generator.space)) {
    throw DimensionMismatch("state and generator live on different spaces");
  }
  if (!generator.matrix.isDiagonal(0.0)) {
    throw std::invalid_argument("rotated_state_family needs a diagonal generator");
  }
  const Eigen::VectorXd diag = generator.matrix.diagonal().real();
  const Eigen::MatrixXcd state = rho.matrix;
  return [diag, state](double phi) -> Eigen::MatrixXcd {
    Eigen::VectorXcd u(diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      u(i) = std::exp(Complex(0.0, -phi * diag(i)));
    }
    return u.asDiagonal() * state * u.conjugate().asDiagonal();
  };
}

void dump_operator_json(const DenseOperator& op, std::ostream& os) {
  nlohmann::ordered_json j;
  j["n_max"] = op.space.n_max();
  j["modes"] = op.space.modes();
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      entries.push_back({op.matrix(r, c).real(), op.matrix(r, c).imag()});
    }
  }
  j["entries"] = std::move(entries);
  os << j.dump();
}

DenseOperator load_operator_json(std::istream& is, long long dimension_cap) {
  const nlohmann::json j = nlohmann::json::parse(is);
  const FockSpace space(j.at("n_max").get<int>(), j.at("modes").get<int>(),
                        dimension_cap);
  const auto& entries = j.at("entries");
  if (static_cast<long long>(entries.size()) != space.dim() * space.dim()) {
    throw std::invalid_argument("entry count does not match the space");
  }
  Eigen::MatrixXcd m(space.dim(), space.dim());
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c, ++k) {
      m(r, c) = Complex(entries[k][0].get<double>(), entries[k][1].get<double>());
    }
  }
  return {space, std::move(m)};
}

}  // namespace qfi::fock
