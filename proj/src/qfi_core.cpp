#include "qfi/qfi_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfi {

namespace {

void require_square(const Eigen::MatrixXcd& m, Eigen::Index dim) {
  if (m.rows() != m.cols() || m.rows() != dim) {
    throw DimensionMismatch("generator is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", kets have dimension " +
                            std::to_string(dim));
  }
}

double clamp_variance(double var) {
  if (var < -1e-12) {
    throw Error("variance " + std::to_string(var) +
                " is negative beyond roundoff");
  }
  return std::max(var, 0.0);
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(
    std::vector<SpectralComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::invalid_argument("spectral decomposition needs >= 1 component");
  }
  const Eigen::Index dim = components_.front().ket.size();
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.ket.size() != dim) {
      throw DimensionMismatch("kets of mixed dimension in decomposition");
    }
    if (!(c.weight > 0.0) || c.weight > 1.0 + kWeightSumTol) {
      throw std::invalid_argument("weight " + std::to_string(c.weight) +
                                  " outside (0, 1]");
    }
    sum += c.weight;
  }
  if (sum > 1.0 + kWeightSumTol) {
    throw std::invalid_argument("weights sum to " + std::to_string(sum) +
                                " > 1");
  }
  std::sort(components_.begin(), components_.end(),
            [](const auto& a, const auto& b) { return a.weight > b.weight; });
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (std::size_t j = i; j < components_.size(); ++j) {
      const std::complex<double> g =
          components_[i].ket.dot(components_[j].ket);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(g - expected) > kOrthonormalTol) {
        throw std::invalid_argument(
            "kets are not orthonormal: |<" + std::to_string(i) + "|" +
            std::to_string(j) + "> - " + std::to_string(expected) + "| = " +
            std::to_string(std::abs(g - expected)));
      }
    }
  }
}

GeneratorStats generator_stats(const SpectralDecomposition& decomp,
                               const Eigen::MatrixXcd& generator) {
  require_square(generator, decomp.dim());
  const auto& comps = decomp.components();
  const std::size_t m = comps.size();

  std::vector<Eigen::VectorXcd> h_kets(m);
  for (std::size_t i = 0; i < m; ++i) h_kets[i] = generator * comps[i].ket;

  GeneratorStats stats;
  stats.variances.resize(m);
  stats.transitions = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double mean = std::real(comps[i].ket.dot(h_kets[i]));
    stats.variances[i] = clamp_variance(h_kets[i].squaredNorm() - mean * mean);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double t = std::norm(comps[i].ket.dot(h_kets[j]));
      stats.transitions(i, j) = t;
      stats.transitions(j, i) = t;
    }
  }
  return stats;
}

QfiResult qfi_unitary(const SpectralDecomposition& decomp,
                      const Eigen::MatrixXcd& generator) {
  const auto stats = generator_stats(decomp, generator);
  const auto& comps = decomp.components();
  const std::size_t m = comps.size();

  QfiResult out;
  for (std::size_t i = 0; i < m; ++i) {
    out.mean_variance_term += 4.0 * comps[i].weight * stats.variances[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double pi = comps[i].weight;
      const double pj = comps[j].weight;
      out.transition_term +=
          16.0 * pi * pj / (pi + pj) * stats.transitions(i, j);
    }
  }
  out.classical_term = 0.0;  // weights are phi-independent by construction
  out.value = out.classical_term + out.mean_variance_term - out.transition_term;
  if (out.value < 0.0) {
    if (out.value < -1e-10) {
      throw Error("QFI " + std::to_string(out.value) +
                  " is negative beyond roundoff");
    }
    out.value = 0.0;
  }
  return out;
}

double qfi_pure(const Eigen::VectorXcd& ket, const Eigen::MatrixXcd& generator) {
  require_square(generator, ket.size());
  if (std::abs(ket.norm() - 1.0) > 1e-10) {
    throw NotNormalized("ket norm " + std::to_string(ket.norm()) +
                        " deviates from 1 beyond 1e-10");
  }
  const Eigen::VectorXcd h_ket = generator * ket;
  const double mean = std::real(ket.dot(h_ket));
  return 4.0 * clamp_variance(h_ket.squaredNorm() - mean * mean);
}

double qfi_finite_difference(
    const std::function<Eigen::MatrixXcd(double)>& rho_family, double phi,
    const FiniteDifferenceOptions& options) {
  if (!(options.step > 0.0)) {
    throw std::invalid_argument("finite-difference step must be > 0");
  }
  const Eigen::MatrixXcd rho = rho_family(phi);
  if (rho.rows() != rho.cols()) {
    throw DimensionMismatch("density matrix is not square");
  }
  const double scale = std::max(1.0, rho.norm());
  if ((rho - rho.adjoint()).norm() > 1e-10 * scale) {
    throw NonHermitianInput("rho(phi) is not Hermitian within 1e-10");
  }

  const auto central = [&](double h) -> Eigen::MatrixXcd {
    return (rho_family(phi + h) - rho_family(phi - h)) / (2.0 * h);
  };
  Eigen::MatrixXcd drho = central(options.step);
  if (options.richardson) {
    drho = (4.0 * central(options.step / 2.0) - drho) / 3.0;
  }

  const double diff_norm = drho.norm() * 2.0 * options.step;
  if (diff_norm > 0.0 && diff_norm < 1e-13 * rho.norm()) {
    throw StepTooSmall("central difference is below the roundoff floor");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success) {
    throw Error("eigendecomposition of rho(phi) failed");
  }
  const Eigen::VectorXd p = es.eigenvalues();
  const Eigen::MatrixXcd g =
      es.eigenvectors().adjoint() * drho * es.eigenvectors();

  double f = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    for (Eigen::Index l = 0; l < p.size(); ++l) {
      const double denom = p(k) + p(l);
      if (denom > kSupportCutoff) f += 2.0 * std::norm(g(k, l)) / denom;
    }
  }
  return f;
}

double cramer_rao_bound(double qfi, long repetitions) {
  if (repetitions < 1) {
    throw std::invalid_argument("repetitions must be >= 1");
  }
  if (!(qfi > 0.0)) {
    throw ZeroInformation("QFI must be positive for a finite bound");
  }
  return 1.0 / (static_cast<double>(repetitions) * qfi);
}

}  // namespace qfi
