/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qcrb::numlin {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-12;   // per-entry |H - H^dag| bound
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-12;    // eigenvalues >= -kPsdTol

/// Dense complex Hermitian operator. Entries are validated on construction:
/// finite, and entries[j][k] == conj(entries[k][j]) within kHermTol.
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

private:
  Matrix mat_;
};

/// Unit-trace, positive-semidefinite state.
class DensityOperator {
public:
  explicit DensityOperator(HermitianOperator op);
  explicit DensityOperator(Matrix m) : DensityOperator(HermitianOperator(std::move(m))) {}

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

private:
  HermitianOperator op_;
};

/// Eigensystem with deterministic ordering (ascending eigenvalue, ties broken
/// lexicographically on the phase-normalized eigenvectors) and the kernel
/// index set K = { k : lambda_k <= rank_tolerance }.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;  // orthonormal columns
  double rank_tolerance = 0.0;
  std::vector<int> kernel_indices;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  int rank() const { return dim() - static_cast<int>(kernel_indices.size()); }
  Matrix reconstruct() const;
};

/// tau < 0 selects the default rank tolerance 1e-12 * max(lambda_max, 1).
SpectralDecomposition eigh(const HermitianOperator& h, double tau = -1.0);

/// Principal square root. Eigenvalues in [-kPsdTol, 0) are clamped to 0;
/// anything more negative is rejected as non-PSD.
HermitianOperator mat_sqrt(const DensityOperator& rho);

/// Schatten-p norm from singular values; requires p >= 1.
double schatten_norm(const Matrix& x, double p);

/// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// d_B^2 = 2 (1 - fidelity).
double bures_distance_sq(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace qcrb::numlin
