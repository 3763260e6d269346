/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcrb::qfi {

using numlin::Complex;
using numlin::HermitianOperator;
using numlin::Matrix;
using numlin::SpectralDecomposition;

SldOperator solve_sld(const SpectralDecomposition& decomp, const HermitianOperator& drho,
                      double tau) {
  if (tau <= 0.0) throw std::invalid_argument("solve_sld: tau must be positive");
  const int d = decomp.dim();
  const Matrix D = decomp.eigenvectors.adjoint() * drho.matrix() * decomp.eigenvectors;

  SldOperator out;
  out.op_eigenbasis = Matrix::Zero(d, d);
  out.defined_mask.assign(d, std::vector<bool>(d, false));
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double denom = decomp.eigenvalues(j) + decomp.eigenvalues(k);
      if (denom > tau) {
        out.op_eigenbasis(j, k) = 2.0 * D(j, k) / denom;
        out.defined_mask[j][k] = true;
        out.sup_element = std::max(out.sup_element, std::abs(out.op_eigenbasis(j, k)));
      }
    }
  }
  out.op = decomp.eigenvectors * out.op_eigenbasis * decomp.eigenvectors.adjoint();
  return out;
}

double qfi_f2(const SpectralDecomposition& decomp, const HermitianOperator& drho, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("qfi_f2: tau must be positive");
  const int d = decomp.dim();
  const Matrix D = decomp.eigenvectors.adjoint() * drho.matrix() * decomp.eigenvectors;
  double f2 = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double denom = decomp.eigenvalues(j) + decomp.eigenvalues(k);
      if (denom > tau) f2 += 2.0 * std::norm(D(j, k)) / denom;
    }
  }
  return f2;
}

// ---------------------------------------------------------------------------
// F3 via fidelity differences

namespace {

double f3_quotient(const models::ParametricModel& model, double a, double b) {
  const double eps = b - a;
  return 8.0 * (1.0 - numlin::fidelity(model.rho_at(a), model.rho_at(b))) / (eps * eps);
}

bool growing_sequence(double a0, double a1, double a2) {
  return a0 > 0.0 && a1 > 1.3 * a0 && a2 > 1.3 * a1;
}

}  // namespace

F3Result qfi_f3_fd(const models::ParametricModel& model, double theta, double eps0) {
  model.require_in_domain(theta);
  F3Result out;

  const double span = model.theta_max - model.theta_min;
  if (eps0 > span / 2.0) {
    eps0 = span / 2.0;
    out.eps_shrunk = true;
  }
  double dir = 1.0;
  if (theta + eps0 > model.theta_max) dir = -1.0;  // right boundary: step inward

  const double a0 = f3_quotient(model, theta, theta + dir * eps0);
  const double a1 = f3_quotient(model, theta, theta + dir * eps0 / 2.0);
  const double a2 = f3_quotient(model, theta, theta + dir * eps0 / 4.0);

  if (growing_sequence(a0, a1, a2)) {
    out.divergent = true;
    out.value = a2;
    out.symmetric = a2;
    return out;
  }
  // Two Richardson levels: kill the O(eps) then the O(eps^2) error terms.
  const double b0 = 2.0 * a1 - a0;
  const double b1 = 2.0 * a2 - a1;
  out.value = (4.0 * b1 - b0) / 3.0;

  // Symmetric-displacement variant (the modified Bures metric); falls back to
  // the one-sided value where the pair does not fit the domain.
  if (theta - eps0 / 2.0 >= model.theta_min && theta + eps0 / 2.0 <= model.theta_max) {
    auto sym = [&](double eps) {
      return 8.0 * (1.0 - numlin::fidelity(model.rho_at(theta - eps / 2.0),
                                           model.rho_at(theta + eps / 2.0))) /
             (eps * eps);
    };
    const double s0 = sym(eps0), s1 = sym(eps0 / 2.0), s2 = sym(eps0 / 4.0);
    if (growing_sequence(s0, s1, s2)) {
      out.symmetric = s2;
    } else {
      out.symmetric = (4.0 * (2.0 * s2 - s1) - (2.0 * s1 - s0)) / 3.0;
    }
  } else {
    out.symmetric = out.value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Q operator

namespace {

double resolve_tau(const SpectralDecomposition& decomp, double tau) {
  return tau >= 0.0 ? tau : decomp.rank_tolerance;
}

// Product form Q = L sqrt(rho) assembled elementwise in the eigenbasis and
// rotated back to the original basis.
Matrix product_q(const SpectralDecomposition& decomp, const HermitianOperator& drho, double tau) {
  const int d = decomp.dim();
  const Matrix D = decomp.eigenvectors.adjoint() * drho.matrix() * decomp.eigenvectors;
  Matrix M = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const double denom = decomp.eigenvalues(j) + decomp.eigenvalues(k);
      if (denom > tau) {
        M(j, k) = 2.0 * std::sqrt(std::max(decomp.eigenvalues(k), 0.0)) / denom * D(j, k);
      }
    }
  }
  return decomp.eigenvectors * M * decomp.eigenvectors.adjoint();
}

void fill_residuals(QOperator& q, const models::ParametricModel& model, double theta) {
  const Matrix s = numlin::mat_sqrt(model.rho_at(theta)).matrix();
  const Matrix drho = model.drho_at(theta).matrix();
  q.residual_defining = ((q.op * s + s * q.op.adjoint()) / 2.0 - drho).norm();
  q.residual_symmetry = (s * q.op - q.op.adjoint() * s).norm();
}

int rank_at(const models::ParametricModel& model, double theta, double tau) {
  return numlin::eigh(model.rho_at(theta).op(), tau).rank();
}

bool rank_changes(const models::ParametricModel& model, double theta, double tau, double probe) {
  const int r = rank_at(model, theta, tau);
  if (theta - probe >= model.theta_min && rank_at(model, theta - probe, tau) != r) return true;
  if (theta + probe <= model.theta_max && rank_at(model, theta + probe, tau) != r) return true;
  return false;
}

}  // namespace

QOperator build_q(const models::ParametricModel& model, double theta, double tau) {
  model.require_in_domain(theta);
  const auto decomp = numlin::eigh(model.rho_at(theta).op(), tau);
  const double tau_eff = resolve_tau(decomp, tau);

  QOperator out;
  if (!rank_changes(model, theta, tau_eff, 1e-4)) {
    out.construction = QOperator::Construction::Product;
    out.op = product_q(decomp, model.drho_at(theta), tau_eff);
    out.norm2_sq = out.op.squaredNorm();
    fill_residuals(out, model, theta);
    return out;
  }

  // Rank-changing point: one-sided limit of the product form.
  out.construction = QOperator::Construction::Limit;
  double dir = 1.0;
  if (theta + 1e-3 > model.theta_max) dir = -1.0;

  const double hs[3] = {1e-3, 1e-4, 1e-5};
  Matrix probes[3];
  for (int i = 0; i < 3; ++i) {
    const double t = theta + dir * hs[i];
    const auto dec = numlin::eigh(model.rho_at(t).op(), tau_eff);
    probes[i] = product_q(dec, model.drho_at(t), tau_eff);
  }

  const double n01 = (probes[1] - probes[0]).norm();
  const double n12 = (probes[2] - probes[1]).norm();
  if (n12 > 0.5 * n01 && n12 > 1e-8 * (1.0 + probes[2].norm())) {
    out.divergent = true;
    out.op = probes[2];
    out.norm2_sq = out.op.squaredNorm();
    return out;
  }

  // Entrywise Richardson extrapolation, step ratio 10.
  const Matrix b0 = (10.0 * probes[1] - probes[0]) / 9.0;
  const Matrix b1 = (10.0 * probes[2] - probes[1]) / 9.0;
  out.op = (100.0 * b1 - b0) / 99.0;
  out.norm2_sq = out.op.squaredNorm();
  fill_residuals(out, model, theta);
  return out;
}

// ---------------------------------------------------------------------------
// Delta discrepancy

DeltaResult delta_discrepancy(const models::ParametricModel& model, double theta_prime,
                              double tau) {
  model.require_in_domain(theta_prime);
  const auto curves = models::eigencurves(model, theta_prime);
  const double tau_eff =
      tau >= 0.0 ? tau : numlin::eigh(model.rho_at(theta_prime).op()).rank_tolerance;

  DeltaResult out;
  std::vector<int> kernel;
  for (int j = 0; j < static_cast<int>(curves.size()); ++j) {
    out.curves_reliable = out.curves_reliable && curves[j].reliable;
    if (curves[j].value <= tau_eff) {
      kernel.push_back(j);
      out.value += 2.0 * curves[j].d2;
    }
  }
  if (kernel.empty()) return out;

  // Consistency check against the limit form lim lambda'^2 / lambda; only for
  // analytic models, where curve indices are stable across theta.
  if (model.eigencurve_source != models::EigencurveSource::Analytic) return out;

  double dir = 1.0;
  if (theta_prime + 1e-3 > model.theta_max) dir = -1.0;
  auto limit_sum = [&](double h) {
    const auto probe = models::eigencurves(model, theta_prime + dir * h);
    double s = 0.0;
    for (int j : kernel) {
      if (probe[j].value > 0.0) s += probe[j].d1 * probe[j].d1 / probe[j].value;
    }
    return s;
  };
  const double s1 = limit_sum(1e-3);
  const double s2 = limit_sum(5e-4);
  if (s2 > 1.5 * s1 && s2 > 10.0 * std::abs(out.value) + 1.0) {
    out.limit_divergent = true;
    return out;
  }
  const double extrapolated = 2.0 * s2 - s1;
  const double scale = std::max({std::abs(out.value), std::abs(extrapolated), 1e-9});
  out.limit_consistent = std::abs(extrapolated - out.value) <= 1e-3 * scale;
  return out;
}

// ---------------------------------------------------------------------------
// Report assembly

namespace {

// Max |defined SLD element| at inward probe offsets around theta.
double sld_sup_at(const models::ParametricModel& model, double theta, double tau) {
  const auto dec = numlin::eigh(model.rho_at(theta).op(), tau);
  return solve_sld(dec, model.drho_at(theta), tau).sup_element;
}

bool sld_unbounded_verdict(const models::ParametricModel& model, double theta, double tau) {
  const double hs[3] = {1e-2, 1e-3, 1e-4};
  double sup[3];
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    if (theta - hs[i] >= model.theta_min) s = std::max(s, sld_sup_at(model, theta - hs[i], tau));
    if (theta + hs[i] <= model.theta_max) s = std::max(s, sld_sup_at(model, theta + hs[i], tau));
    sup[i] = s;
  }
  return sup[1] > sup[0] && sup[2] > sup[1] && sup[2] > 5.0 * sup[0];
}

}  // namespace

QfiReport qfi_report(const models::ParametricModel& model, double theta, const Tolerances& cfg) {
  model.require_in_domain(theta);
  QfiReport r;
  r.theta = theta;

  const auto decomp = numlin::eigh(model.rho_at(theta).op(), cfg.rank_tol);
  const double tau = decomp.rank_tolerance;
  r.rank = decomp.rank();
  r.is_singular = rank_changes(model, theta, tau, cfg.singular_probe);

  const auto drho = model.drho_at(theta);
  r.f2 = qfi_f2(decomp, drho, tau);
  r.f3 = qfi_f3_fd(model, theta, cfg.f3_eps0);
  r.delta = delta_discrepancy(model, theta, tau);

  const QOperator q = build_q(model, theta, cfg.rank_tol);
  r.f1_divergent = q.divergent;
  r.f1_q = q.norm2_sq;

  r.sld_sup_element = solve_sld(decomp, drho, tau).sup_element;
  r.sld_bounded = !sld_unbounded_verdict(model, theta, tau);
  return r;
}

}  // namespace qcrb::qfi
