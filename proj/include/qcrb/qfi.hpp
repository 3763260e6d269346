/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <vector>

#include "qcrb/models.hpp"
#include "qcrb/numlin.hpp"

namespace qcrb::qfi {

/// Symmetric logarithmic derivative solved in the eigenbasis of rho.
/// Elements are defined only on pairs with lambda_j + lambda_k > tau; the
/// remaining entries are stored as 0 and flagged in defined_mask.
struct SldOperator {
  numlin::Matrix op;                // original basis, undefined pairs projected out
  numlin::Matrix op_eigenbasis;     // matrix elements <e_j|L|e_k>
  std::vector<std::vector<bool>> defined_mask;  // eigenbasis pair set
  double sup_element = 0.0;         // max |defined element|
};

SldOperator solve_sld(const numlin::SpectralDecomposition& decomp,
                      const numlin::HermitianOperator& drho, double tau);

/// F2: sum over pairs with lambda_j + lambda_k > tau of
/// 2 |<e_j|drho|e_k>|^2 / (lambda_j + lambda_k).
double qfi_f2(const numlin::SpectralDecomposition& decomp,
              const numlin::HermitianOperator& drho, double tau);

struct F3Result {
  double value = 0.0;       // extrapolated; meaningless when divergent
  bool divergent = false;
  double symmetric = 0.0;   // two-sided displacement variant (modified metric)
  bool eps_shrunk = false;  // eps0 reduced to fit the domain
};

/// F3 by one-sided fidelity differences on eps in {eps0, eps0/2, eps0/4}
/// with Richardson extrapolation. At the right boundary steps go inward.
F3Result qfi_f3_fd(const models::ParametricModel& model, double theta, double eps0 = 1e-3);

struct QOperator {
  enum class Construction { Product, Limit };
  numlin::Matrix op;  // original basis; not Hermitian in general
  Construction construction = Construction::Product;
  bool divergent = false;
  double norm2_sq = 0.0;      // ||Q||_2^2; meaningless when divergent
  double residual_defining = 0.0;   // || (Q sqrt(rho) + sqrt(rho) Q^dag)/2 - drho ||_2
  double residual_symmetry = 0.0;   // || sqrt(rho) Q - Q^dag sqrt(rho) ||_2
};

/// Q = L sqrt(rho) elementwise at regular points; one-sided Richardson limit
/// of the product form at rank-changing points.
QOperator build_q(const models::ParametricModel& model, double theta, double tau = -1.0);

struct DeltaResult {
  double value = 0.0;           // sum of 2 lambda_k'' over vanishing curves
  bool limit_consistent = true; // agreement with lim lambda'^2 / lambda
  bool limit_divergent = false; // the limit form grows without bound
  bool curves_reliable = true;
};

DeltaResult delta_discrepancy(const models::ParametricModel& model, double theta_prime,
                              double tau);

struct Tolerances {
  double rank_tol = -1.0;        // negative -> scaled default
  double f3_eps0 = 1e-3;
  double singular_probe = 1e-4;  // rank comparison offset
};

struct QfiReport {
  double theta = 0.0;
  int rank = 0;
  bool is_singular = false;
  double f2 = 0.0;
  F3Result f3;
  double f1_q = 0.0;
  bool f1_divergent = false;
  DeltaResult delta;
  double sld_sup_element = 0.0;
  bool sld_bounded = true;
};

QfiReport qfi_report(const models::ParametricModel& model, double theta,
                     const Tolerances& cfg = {});

}  // namespace qcrb::qfi
