/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcrb/models.hpp"
#include "qcrb/qfi.hpp"

namespace qcrb::estimation {

/// Binomial outcome distribution of the count t over n projective measurements
/// on the computational basis, pmf(t; q) = C(n,t) q^t (1-q)^(n-t).
struct OutcomeDistribution {
  int n = 1;
  double q = 0.0;

  double pmf(int t) const;
  double dpmf_dq(int t) const;
};

OutcomeDistribution pmf_family(int n, double q);

/// Maximum-likelihood estimators; theta-version by equivariance.
double mle_q(int t, int n);
double mle_theta(int t, int n);

struct Estimator {
  enum class Param { Q, Theta };
  std::string name;
  std::function<double(int, int)> estimate;  // (t, n)
  Param param = Param::Q;
};

Estimator mle_q_estimator();
Estimator mle_theta_estimator();

struct EstimatorStats {
  double mean = 0.0;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double dmean = 0.0;  // d mean / d theta (chain rule through q = sin^2 theta)
};

/// Exact finite sums over t = 0..n; no sampling.
EstimatorStats exact_stats(const Estimator& est, int n, double theta);

/// (d mean / d theta)^2 / qfi_total. Caller supplies qfi_total = n * F;
/// a divergent QFI yields bound 0 (signalled by qfi_total <= 0).
double biased_bound(const EstimatorStats& stats, double qfi_total);

struct YchResult {
  double lhs = 0.0;        // (mse(theta) + mse(theta+eps) + eps^2) / 2
  double rhs = 0.0;        // eps^2 / (4 d_B^2)
  double biased_lhs = 0.0; // V(theta) + V(theta+eps) + (dmean_gap)^2
  double biased_rhs = 0.0; // (dmean_gap)^2 / (2 d_B^2)
  double db_sq = 0.0;      // n-copy Bures distance squared
};

YchResult ych_check(int n, const Estimator& est, double theta, double eps);

/// Appendix-style two-point bound from parallel diagonal amplitudes over the
/// n-copy outcome distribution; returns beta^2 / (4 ||A' - A||_2^2).
double purification_bound(int n, const Estimator& est, double theta, double theta_prime);

struct BoundRecord {
  double theta = 0.0;
  int n = 0;
  double mse = 0.0;
  double variance = 0.0;
  double nvar = 0.0;
  double unbiased_bound = 0.0;  // 1 / (n F3); 0 when F3 diverges
  double f2_bound = 0.0;        // 1 / (n F2)
  double biased_bound = 0.0;    // dmean^2 / (n F3); 0 when F3 diverges
  bool violated_unbiased = false;
  bool violated_f2 = false;
  bool holds_biased = true;
};

/// One bound audit per (n, theta) grid cell, in deterministic row order
/// (theta-major, then n in the given order).
std::vector<BoundRecord> audit_scan(const models::ParametricModel& model, const Estimator& est,
                                    const std::vector<int>& ns, const std::vector<double>& grid);

/// Monte Carlo cross-check of exact_stats (flag-gated in the CLI).
EstimatorStats mc_stats(const Estimator& est, int n, double theta, std::uint64_t seed,
                        int draws = 200000);

}  // namespace qcrb::estimation
