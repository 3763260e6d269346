/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <random>

#include <doctest.h>

#include "qcrb/numlin.hpp"

using namespace qcrb::numlin;

namespace {

Matrix random_hermitian(std::mt19937& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) m(j, k) = Complex(g(rng), g(rng));
  }
  return ((m + m.adjoint()) / 2.0).eval();
}

DensityOperator random_density(std::mt19937& rng, int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) a(j, k) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(((rho + rho.adjoint()) / 2.0).eval());
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("eigh on diagonal states") {
  auto dec = eigh(HermitianOperator(diag2(0.7, 0.3)), 1e-12);
  CHECK(dec.eigenvalues(0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(dec.eigenvalues(1) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(dec.kernel_indices.empty());
  CHECK(dec.rank() == 2);

  auto dec2 = eigh(HermitianOperator(diag2(1.0, 0.0)), 1e-12);
  CHECK(dec2.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(dec2.eigenvalues(1) == doctest::Approx(1.0));
  REQUIRE(dec2.kernel_indices.size() == 1);
  CHECK(dec2.kernel_indices[0] == 0);
  CHECK(dec2.rank() == 1);
}

TEST_CASE("eigh reconstruction and orthonormality on random inputs") {
  std::mt19937 rng(42);
  for (int d = 2; d <= 8; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      HermitianOperator h(random_hermitian(rng, d));
      auto dec = eigh(h);
      // Re-assembly oracle.
      CHECK((dec.reconstruct() - h.matrix()).cwiseAbs().maxCoeff() < 1e-10);
      // Gram matrix is the identity.
      Matrix gram = dec.eigenvectors.adjoint() * dec.eigenvectors;
      CHECK((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-10);
      // Trace preserved.
      CHECK(dec.eigenvalues.sum() == doctest::Approx(h.matrix().trace().real()).epsilon(1e-10));
      // Ascending order.
      for (int j = 1; j < d; ++j) CHECK(dec.eigenvalues(j) >= dec.eigenvalues(j - 1) - 1e-12);
    }
  }
}

TEST_CASE("eigh rejects non-Hermitian input with a diagnostic") {
  Matrix m = diag2(0.5, 0.5);
  m(0, 1) = 1e-6;
  CHECK_THROWS_WITH_AS(HermitianOperator(std::move(m)),
                       doctest::Contains("asymmetry"), std::invalid_argument);
}

TEST_CASE("mat_sqrt on diagonal and projector states") {
  auto r1 = mat_sqrt(DensityOperator(diag2(0.25, 0.75)));
  CHECK(r1.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r1.matrix()(1, 1).real() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));

  auto r2 = mat_sqrt(DensityOperator(diag2(0.5, 0.5)));
  CHECK(r2.matrix()(0, 0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // |+><+| is idempotent, so it is its own square root.
  Matrix plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  auto r3 = mat_sqrt(DensityOperator(plus));
  CHECK((r3.matrix() - plus).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("mat_sqrt squares back to the input") {
  std::mt19937 rng(7);
  for (int d = 2; d <= 6; ++d) {
    auto rho = random_density(rng, d);
    auto root = mat_sqrt(rho);
    CHECK((root.matrix() * root.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("schatten norms") {
  CHECK(schatten_norm(diag2(3.0, 4.0), 2.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(schatten_norm(diag2(3.0, -4.0), 1.0) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(schatten_norm(Matrix::Zero(3, 3), 1.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(schatten_norm(diag2(1.0, 1.0), 0.5), std::invalid_argument);
}

TEST_CASE("schatten-2 norm equals sqrt(tr(X^dag X))") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int d = 2 + rep % 5;
    Matrix x(d, d);
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) x(j, k) = Complex(g(rng), g(rng));
    const double via_sv = schatten_norm(x, 2.0);
    const double via_trace = std::sqrt((x.adjoint() * x).trace().real());
    CHECK(via_sv == doctest::Approx(via_trace).epsilon(1e-10));
  }
}

TEST_CASE("fidelity examples") {
  DensityOperator rho(diag2(0.8, 0.2));
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));

  DensityOperator e0(diag2(1.0, 0.0));
  DensityOperator e1(diag2(0.0, 1.0));
  CHECK(fidelity(e0, e1) == doctest::Approx(0.0));

  // Commuting closed form: sqrt((1-q)(1-q')) + sqrt(q q').
  DensityOperator a(diag2(0.8, 0.2));
  DensityOperator b(diag2(0.5, 0.5));
  const double expected = std::sqrt(0.8 * 0.5) + std::sqrt(0.2 * 0.5);
  CHECK(fidelity(a, b) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.9486832980505138).epsilon(1e-12));
}

TEST_CASE("fidelity is symmetric and equals the Bhattacharyya coefficient for diagonals") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const int d = 2 + rep % 4;
    Eigen::VectorXd p(d), q(d);
    for (int j = 0; j < d; ++j) {
      p(j) = u(rng) + 1e-3;
      q(j) = u(rng) + 1e-3;
    }
    p /= p.sum();
    q /= q.sum();
    Matrix mp = Matrix::Zero(d, d), mq = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      mp(j, j) = p(j);
      mq(j, j) = q(j);
    }
    DensityOperator rho(std::move(mp)), sigma(std::move(mq));
    const double f = fidelity(rho, sigma);
    CHECK(f == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-10));
    double bhatta = 0.0;
    for (int j = 0; j < d; ++j) bhatta += std::sqrt(p(j) * q(j));
    CHECK(f == doctest::Approx(bhatta).epsilon(1e-12));
  }

  // Symmetry also off the commuting family.
  for (int rep = 0; rep < 10; ++rep) {
    auto rho = random_density(rng, 3);
    auto sigma = random_density(rng, 3);
    CHECK(fidelity(rho, sigma) == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-10));
  }
}

TEST_CASE("Bures distance") {
  DensityOperator rho(diag2(0.8, 0.2));
  CHECK(bures_distance_sq(rho, rho) == doctest::Approx(0.0).epsilon(1e-12));

  DensityOperator e0(diag2(1.0, 0.0));
  DensityOperator e1(diag2(0.0, 1.0));
  CHECK(bures_distance_sq(e0, e1) == doctest::Approx(2.0).epsilon(1e-12));

  // Closed form 2[1 - sqrt((1-q)(1-q')) - sqrt(q q')] at q=0.2, q'=0.5.
  DensityOperator a(diag2(0.8, 0.2));
  DensityOperator b(diag2(0.5, 0.5));
  const double expected = 2.0 * (1.0 - std::sqrt(0.8 * 0.5) - std::sqrt(0.2 * 0.5));
  CHECK(bures_distance_sq(a, b) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.10263340389897235).epsilon(1e-10));
}

TEST_CASE("density operator validation") {
  CHECK_THROWS_AS(DensityOperator(diag2(0.7, 0.7)), std::invalid_argument);
  CHECK_THROWS_AS(DensityOperator(diag2(1.5, -0.5)), std::invalid_argument);
}
