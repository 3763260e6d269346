/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qcrb::numlin {

namespace {

bool all_finite(const Matrix& m) {
  return m.allFinite();
}

// Rotate a column's global phase so that the first component with modulus
// above 1e-8 becomes positive real.
void phase_normalize(Eigen::Ref<Eigen::VectorXcd> col) {
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    const double mod = std::abs(col(i));
    if (mod > 1e-8) {
      col *= std::conj(col(i)) / mod;
      col(i) = Complex(std::abs(col(i)), 0.0);
      return;
    }
  }
}

bool lex_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
  }
  if (!all_finite(mat_)) {
    throw std::invalid_argument("HermitianOperator: non-finite entry");
  }
  double max_asym = 0.0;
  for (Eigen::Index j = 0; j < mat_.rows(); ++j) {
    for (Eigen::Index k = j; k < mat_.cols(); ++k) {
      max_asym = std::max(max_asym, std::abs(mat_(j, k) - std::conj(mat_(k, j))));
    }
  }
  if (max_asym > kHermTol) {
    std::ostringstream os;
    os << "HermitianOperator: max asymmetry " << max_asym << " exceeds tolerance " << kHermTol;
    throw std::invalid_argument(os.str());
  }
  // Symmetrize to kill round-off below the tolerance.
  mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " differs from 1 beyond " << kTraceTol;
    throw std::invalid_argument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    std::ostringstream os;
    os << "DensityOperator: negative eigenvalue " << es.eigenvalues().minCoeff();
    throw std::invalid_argument(os.str());
  }
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eigh(const HermitianOperator& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }

  const int d = h.dim();
  Matrix vecs = es.eigenvectors();
  Vector vals = es.eigenvalues();
  for (int j = 0; j < d; ++j) phase_normalize(vecs.col(j));

  // Eigen already returns ascending order; enforce the documented tie-break.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double tie = 1e-14 * std::max(1.0, std::max(std::abs(vals(a)), std::abs(vals(b))));
    if (std::abs(vals(a) - vals(b)) > tie) return vals(a) < vals(b);
    return lex_less(vecs.col(a), vecs.col(b));
  });

  SpectralDecomposition out;
  out.eigenvalues = Vector(d);
  out.eigenvectors = Matrix(d, d);
  for (int j = 0; j < d; ++j) {
    out.eigenvalues(j) = vals(order[j]);
    out.eigenvectors.col(j) = vecs.col(order[j]);
  }
  out.rank_tolerance =
      tau >= 0 ? tau : 1e-12 * std::max(out.eigenvalues.maxCoeff(), 1.0);
  for (int j = 0; j < d; ++j) {
    if (out.eigenvalues(j) <= out.rank_tolerance) out.kernel_indices.push_back(j);
  }
  return out;
}

HermitianOperator mat_sqrt(const DensityOperator& rho) {
  SpectralDecomposition dec = eigh(rho.op(), 0.0);
  Vector vals = dec.eigenvalues;
  for (Eigen::Index j = 0; j < vals.size(); ++j) {
    if (vals(j) < -kPsdTol) {
      std::ostringstream os;
      os << "mat_sqrt: non-PSD input, eigenvalue " << vals(j);
      throw std::invalid_argument(os.str());
    }
    vals(j) = std::sqrt(std::max(vals(j), 0.0));
  }
  Matrix root = dec.eigenvectors * vals.asDiagonal() * dec.eigenvectors.adjoint();
  return HermitianOperator(((root + root.adjoint()) / 2.0).eval());
}

double schatten_norm(const Matrix& x, double p) {
  if (p < 1.0) {
    throw std::invalid_argument("schatten_norm: p must be >= 1");
  }
  if (!all_finite(x)) {
    throw std::invalid_argument("schatten_norm: non-finite entry");
  }
  Eigen::JacobiSVD<Matrix> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  const Matrix prod = mat_sqrt(rho).matrix() * mat_sqrt(sigma).matrix();
  return schatten_norm(prod, 1.0);
}

double bures_distance_sq(const DensityOperator& rho, const DensityOperator& sigma) {
  return 2.0 * (1.0 - fidelity(rho, sigma));
}

}  // namespace qcrb::numlin
