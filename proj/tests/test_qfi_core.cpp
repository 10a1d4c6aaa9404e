#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "qfi/qfi_core.hpp"

using namespace qfi;
using Complex = std::complex<double>;

namespace {

Eigen::MatrixXcd random_hermitian(std::mt19937& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      a(r, c) = Complex(gauss(rng), gauss(rng));
    }
  }
  return (a + a.adjoint()) / 2.0;
}

Eigen::VectorXcd random_ket(std::mt19937& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v / v.norm();
}

// Random rank-2 mixture with orthonormal kets and weights summing to one.
SpectralDecomposition random_rank2_decomposition(std::mt19937& rng,
                                                 Eigen::Index dim) {
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  Eigen::VectorXcd u = random_ket(rng, dim);
  Eigen::VectorXcd v = random_ket(rng, dim);
  v -= u.dot(v) * u;
  v /= v.norm();
  const double p1 = unit(rng);
  return SpectralDecomposition({{p1, u}, {1.0 - p1, v}});
}

// phi -> U rho0 U^dagger for U = e^{-i phi H}.
std::function<Eigen::MatrixXcd(double)> unitary_family(
    const Eigen::MatrixXcd& rho0, const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  REQUIRE(es.info() == Eigen::Success);
  const Eigen::MatrixXcd w = es.eigenvectors();
  const Eigen::VectorXd lam = es.eigenvalues();
  return [rho0, w, lam](double phi) {
    Eigen::VectorXcd u(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      u(i) = std::exp(Complex(0.0, -phi * lam(i)));
    }
    const Eigen::MatrixXcd unitary = w * u.asDiagonal() * w.adjoint();
    return Eigen::MatrixXcd(unitary * rho0 * unitary.adjoint());
  };
}

Eigen::MatrixXcd to_density(const SpectralDecomposition& decomp) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(decomp.dim(), decomp.dim());
  for (const auto& c : decomp.components()) {
    rho += c.weight * c.ket * c.ket.adjoint();
  }
  return rho;
}

}  // namespace

TEST_CASE("decomposition validation") {
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3);
  e0(0) = 1.0;
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(3);
  e1(1) = 1.0;

  CHECK_THROWS_AS(SpectralDecomposition({}), std::invalid_argument);
  CHECK_THROWS_AS(SpectralDecomposition({{0.0, e0}}), std::invalid_argument);
  CHECK_THROWS_AS(SpectralDecomposition({{0.6, e0}, {0.6, e1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpectralDecomposition({{0.5, e0}, {0.5, e0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SpectralDecomposition({{0.5, e0}, {0.5, Eigen::VectorXcd::Ones(2)}}),
      DimensionMismatch);

  // Weights come out sorted descending regardless of input order.
  const SpectralDecomposition d({{0.25, e1}, {0.75, e0}});
  CHECK(d.components()[0].weight == 0.75);
  CHECK(d.components()[1].weight == 0.25);
}

TEST_CASE("single component reduces to the pure-state formula") {
  std::mt19937 rng(11);
  const Eigen::MatrixXcd h = random_hermitian(rng, 6);
  const Eigen::VectorXcd ket = random_ket(rng, 6);
  const auto result = qfi_unitary(SpectralDecomposition({{1.0, ket}}), h);
  CHECK(result.value == doctest::Approx(qfi_pure(ket, h)).epsilon(1e-12));
  CHECK(result.transition_term == 0.0);
  CHECK(result.classical_term == 0.0);
}

TEST_CASE("two components follow the rank-2 formula") {
  std::mt19937 rng(12);
  const Eigen::MatrixXcd h = random_hermitian(rng, 8);
  const auto decomp = random_rank2_decomposition(rng, 8);
  const auto stats = generator_stats(decomp, h);
  const double p1 = decomp.components()[0].weight;
  const double p2 = decomp.components()[1].weight;
  const double expected = 4.0 * p1 * stats.variances[0] +
                          4.0 * p2 * stats.variances[1] -
                          16.0 * p1 * p2 * stats.transitions(0, 1);
  const auto result = qfi_unitary(decomp, h);
  CHECK(result.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(result.value ==
        doctest::Approx(result.classical_term + result.mean_variance_term -
                        result.transition_term)
            .epsilon(1e-12));
}

TEST_CASE("generator eigenbasis carries no information") {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  h.diagonal() << 0.0, 1.0, 2.0, 3.0;
  std::vector<SpectralComponent> comps;
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(4);
    e(i) = 1.0;
    comps.push_back({i == 0 ? 0.5 : 0.25, e});
  }
  const auto result = qfi_unitary(SpectralDecomposition(std::move(comps)), h);
  CHECK(result.value == 0.0);
}

TEST_CASE("dimension mismatch is rejected") {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(3);
  ket(0) = 1.0;
  CHECK_THROWS_AS(qfi_unitary(SpectralDecomposition({{1.0, ket}}),
                              Eigen::MatrixXcd::Identity(4, 4)),
                  DimensionMismatch);
  CHECK_THROWS_AS(qfi_pure(ket, Eigen::MatrixXcd::Identity(4, 4)),
                  DimensionMismatch);
}

TEST_CASE("pure-state QFI basics") {
  // H-eigenvector: no information.
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
  h.diagonal() << 0.0, 1.0, 2.0;
  Eigen::VectorXcd eig = Eigen::VectorXcd::Zero(3);
  eig(1) = 1.0;
  CHECK(qfi_pure(eig, h) == 0.0);

  // Equal superposition of n = 0 and n = 2 under the number operator:
  // <n> = 1, <n^2> = 2, so F = 4 (2 - 1) = 4.
  Eigen::VectorXcd cat = Eigen::VectorXcd::Zero(3);
  cat(0) = cat(2) = 1.0 / std::sqrt(2.0);
  CHECK(qfi_pure(cat, h) == doctest::Approx(4.0).epsilon(1e-14));

  CHECK_THROWS_AS(qfi_pure(2.0 * cat, h), NotNormalized);
}

TEST_CASE("generator shift invariance") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 7);
    const auto decomp = random_rank2_decomposition(rng, 7);
    const auto base = qfi_unitary(decomp, h);
    const auto shifted = qfi_unitary(
        decomp, h + 3.7 * Eigen::MatrixXcd::Identity(7, 7));
    CHECK(std::abs(base.value - shifted.value) < 1e-10);
    CHECK(std::abs(base.mean_variance_term - shifted.mean_variance_term) <
          1e-10);
    CHECK(std::abs(base.transition_term - shifted.transition_term) < 1e-10);
  }
}

TEST_CASE("ket phases do not matter") {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 5);
    auto decomp = random_rank2_decomposition(rng, 5);
    const double base = qfi_unitary(decomp, h).value;

    std::vector<SpectralComponent> rotated = decomp.components();
    rotated[0].ket *= std::exp(Complex(0.0, angle(rng)));
    rotated[1].ket *= std::exp(Complex(0.0, angle(rng)));
    const double turned =
        qfi_unitary(SpectralDecomposition(std::move(rotated)), h).value;
    CHECK(std::abs(base - turned) < 1e-12 * std::max(1.0, base));
  }
}

TEST_CASE("transition term only ever lowers the QFI") {
  std::mt19937 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXcd h = random_hermitian(rng, 6);
    const auto decomp = random_rank2_decomposition(rng, 6);
    const auto result = qfi_unitary(decomp, h);
    CHECK(result.transition_term >= 0.0);
    CHECK(result.value <= result.mean_variance_term + 1e-12);
  }
}

TEST_CASE("finite-difference oracle agrees with the closed formula") {
  std::mt19937 rng(16);
  std::uniform_int_distribution<int> dims(4, 16);
  int done = 0;
  while (done < 8) {
    const Eigen::Index dim = dims(rng);
    const Eigen::MatrixXcd h = random_hermitian(rng, dim);
    const auto decomp = random_rank2_decomposition(rng, dim);
    const double exact = qfi_unitary(decomp, h).value;
    if (exact < 1e-2) continue;  // relative comparison needs a signal
    const double numeric =
        qfi_finite_difference(unitary_family(to_density(decomp), h), 0.37);
    CHECK(std::abs(numeric - exact) < 1e-6 * exact);
    ++done;
  }
}

TEST_CASE("finite difference matches the pure-state formula") {
  std::mt19937 rng(17);
  const Eigen::MatrixXcd h = random_hermitian(rng, 6);
  const Eigen::VectorXcd ket = random_ket(rng, 6);
  const Eigen::MatrixXcd rho0 = ket * ket.adjoint();
  const double exact = qfi_pure(ket, h);
  const double numeric = qfi_finite_difference(unitary_family(rho0, h), 0.9);
  CHECK(std::abs(numeric - exact) < 1e-6 * std::max(1.0, exact));
}

TEST_CASE("constant families carry zero information") {
  const Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  const double f = qfi_finite_difference([&](double) { return rho; }, 0.1);
  CHECK(f < 1e-10);
}

TEST_CASE("finite-difference error paths") {
  const Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  Eigen::MatrixXcd sigma_x(2, 2);
  sigma_x << 0.0, 1.0, 1.0, 0.0;

  // Variation far below the roundoff floor.
  const auto faint = [&](double phi) -> Eigen::MatrixXcd {
    return rho + phi * 1e-16 * sigma_x;
  };
  CHECK_THROWS_AS(qfi_finite_difference(faint, 0.2), StepTooSmall);

  const auto skewed = [&](double) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.5, 0.1, -0.1, 0.5;
    return bad;
  };
  CHECK_THROWS_AS(qfi_finite_difference(skewed, 0.0), NonHermitianInput);

  CHECK_THROWS_AS(
      qfi_finite_difference([&](double) { return rho; }, 0.0, {-1.0, false}),
      std::invalid_argument);
}

TEST_CASE("richardson refinement beats the plain difference at coarse steps") {
  std::mt19937 rng(18);
  const Eigen::MatrixXcd h = random_hermitian(rng, 4);
  const auto decomp = random_rank2_decomposition(rng, 4);
  const auto family = unitary_family(to_density(decomp), h);
  const double exact = qfi_unitary(decomp, h).value;

  const double plain = qfi_finite_difference(family, 0.2, {0.05, false});
  const double refined = qfi_finite_difference(family, 0.2, {0.05, true});
  CHECK(std::abs(refined - exact) < std::abs(plain - exact));
  CHECK(std::abs(refined - exact) < 1e-4 * std::max(1.0, exact));
}

TEST_CASE("Cramer-Rao bound") {
  CHECK(cramer_rao_bound(4.0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  // Heisenberg-style arithmetic: F = n^2 gives variance 1/n^2.
  CHECK(cramer_rao_bound(15.429617341193877, 1) ==
        doctest::Approx(1.0 / 15.429617341193877).epsilon(1e-15));
  // Lossless ECS at alpha = 2 with 100 repetitions (50-digit arithmetic).
  CHECK(cramer_rao_bound(23.850934260322460, 100) ==
        doctest::Approx(4.1927078792194875e-4).epsilon(1e-14));

  CHECK_THROWS_AS(cramer_rao_bound(0.0, 1), ZeroInformation);
  CHECK_THROWS_AS(cramer_rao_bound(-1.0, 5), ZeroInformation);
  CHECK_THROWS_AS(cramer_rao_bound(1.0, 0), std::invalid_argument);
}
