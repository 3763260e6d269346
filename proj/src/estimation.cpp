/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/estimation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qcrb::estimation {

namespace {

double lchoose(int n, int t) {
  return std::lgamma(n + 1.0) - std::lgamma(t + 1.0) - std::lgamma(n - t + 1.0);
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    std::ostringstream os;
    os << "binomial parameter q = " << q << " outside [0, 1]";
    throw std::domain_error(os.str());
  }
}

// C(n,t) q^a (1-q)^b in log space; exact at the q = 0/1 boundaries.
double binom_term(int n, int t, double q, int a, int b) {
  if (a > 0 && q == 0.0) return 0.0;
  if (b > 0 && q == 1.0) return 0.0;
  double lp = lchoose(n, t);
  if (a > 0) lp += a * std::log(q);
  if (b > 0) lp += b * std::log1p(-q);
  return std::exp(lp);
}

// q and dq/dtheta for the estimator's parameterization.
std::pair<double, double> q_of_theta(const Estimator& est, double theta) {
  if (est.param == Estimator::Param::Theta) {
    const double s = std::sin(theta);
    return {s * s, std::sin(2.0 * theta)};
  }
  return {theta, 1.0};
}

}  // namespace

double OutcomeDistribution::pmf(int t) const {
  if (t < 0 || t > n) throw std::out_of_range("pmf: t outside {0..n}");
  return binom_term(n, t, q, t, n - t);
}

double OutcomeDistribution::dpmf_dq(int t) const {
  if (t < 0 || t > n) throw std::out_of_range("dpmf_dq: t outside {0..n}");
  double d = 0.0;
  if (t > 0) d += t * binom_term(n, t, q, t - 1, n - t);
  if (t < n) d -= (n - t) * binom_term(n, t, q, t, n - t - 1);
  return d;
}

OutcomeDistribution pmf_family(int n, double q) {
  if (n < 1) throw std::invalid_argument("pmf_family: n must be >= 1");
  check_q(q);
  return {n, q};
}

double mle_q(int t, int n) {
  if (t < 0 || t > n) throw std::out_of_range("mle_q: t outside {0..n}");
  return static_cast<double>(t) / n;
}

double mle_theta(int t, int n) { return std::asin(std::sqrt(mle_q(t, n))); }

Estimator mle_q_estimator() {
  return {"mle_q", [](int t, int n) { return mle_q(t, n); }, Estimator::Param::Q};
}

Estimator mle_theta_estimator() {
  return {"mle_theta", [](int t, int n) { return mle_theta(t, n); }, Estimator::Param::Theta};
}

EstimatorStats exact_stats(const Estimator& est, int n, double theta) {
  const auto [q, dq_dtheta] = q_of_theta(est, theta);
  const OutcomeDistribution dist = pmf_family(n, q);

  double mean = 0.0, dmean_q = 0.0;
  for (int t = 0; t <= n; ++t) {
    const double e = est.estimate(t, n);
    mean += e * dist.pmf(t);
    dmean_q += e * dist.dpmf_dq(t);
  }
  double variance = 0.0, mse = 0.0;
  for (int t = 0; t <= n; ++t) {
    const double e = est.estimate(t, n);
    const double p = dist.pmf(t);
    variance += p * (e - mean) * (e - mean);
    mse += p * (e - theta) * (e - theta);
  }

  EstimatorStats s;
  s.mean = mean;
  s.bias = mean - theta;
  s.variance = variance;
  s.mse = mse;
  s.dmean = dmean_q * dq_dtheta;
  return s;
}

double biased_bound(const EstimatorStats& stats, double qfi_total) {
  if (qfi_total <= 0.0) return 0.0;  // divergent QFI: the bound degenerates to 0
  return stats.dmean * stats.dmean / qfi_total;
}

YchResult ych_check(int n, const Estimator& est, double theta, double eps) {
  const auto [q1, d1] = q_of_theta(est, theta);
  const auto [q2, d2] = q_of_theta(est, theta + eps);
  (void)d1;
  (void)d2;
  const OutcomeDistribution p1 = pmf_family(n, q1);
  const OutcomeDistribution p2 = pmf_family(n, q2);

  // n-copy Bures distance, two routes that must agree for the diagonal family:
  // product-state fidelity vs the Bhattacharyya coefficient of the pmfs.
  const double fid1 = std::sqrt(q1 * q2) + std::sqrt((1.0 - q1) * (1.0 - q2));
  const double fid_product = std::pow(fid1, n);
  double bhatta = 0.0;
  for (int t = 0; t <= n; ++t) bhatta += std::sqrt(p1.pmf(t) * p2.pmf(t));
  if (std::abs(fid_product - bhatta) > 1e-11) {
    throw std::logic_error("ych_check: fidelity routes disagree beyond 1e-11");
  }
  const double db_sq = 2.0 * (1.0 - bhatta);

  const EstimatorStats s1 = exact_stats(est, n, theta);
  const EstimatorStats s2 = exact_stats(est, n, theta + eps);

  YchResult out;
  out.db_sq = db_sq;
  out.lhs = (s1.mse + s2.mse + eps * eps) / 2.0;
  out.rhs = (eps == 0.0 || db_sq <= 0.0) ? 0.0 : eps * eps / (4.0 * db_sq);

  const double gap = s2.mean - s1.mean;
  out.biased_lhs = s1.variance + s2.variance + gap * gap;
  out.biased_rhs = (gap == 0.0) ? 0.0 : gap * gap / (2.0 * db_sq);
  return out;
}

double purification_bound(int n, const Estimator& est, double theta, double theta_prime) {
  if (theta_prime == theta) return 0.0;
  const auto [q1, d1] = q_of_theta(est, theta);
  const auto [q2, d2] = q_of_theta(est, theta_prime);
  (void)d1;
  (void)d2;
  const OutcomeDistribution p1 = pmf_family(n, q1);
  const OutcomeDistribution p2 = pmf_family(n, q2);

  // Parallel diagonal amplitudes over the n-copy outcome distribution:
  // a_t = sqrt(p_theta(t)), so ||A' - A||_2^2 equals the Bures distance squared.
  double denom = 0.0, corr = 0.0;
  for (int t = 0; t <= n; ++t) {
    const double diff = std::sqrt(p2.pmf(t)) - std::sqrt(p1.pmf(t));
    denom += diff * diff;
    corr += (est.estimate(t, n) - theta) * diff * diff;
  }
  if (denom <= 0.0) return 0.0;
  const double beta = (theta_prime - theta) - corr;
  return beta * beta / (4.0 * denom);
}

std::vector<BoundRecord> audit_scan(const models::ParametricModel& model, const Estimator& est,
                                    const std::vector<int>& ns, const std::vector<double>& grid) {
  std::vector<BoundRecord> out;
  out.reserve(grid.size() * ns.size());
  for (double theta : grid) {
    const qfi::QfiReport rep = qfi::qfi_report(model, theta);
    for (int n : ns) {
      const EstimatorStats stats = exact_stats(est, n, theta);
      BoundRecord rec;
      rec.theta = theta;
      rec.n = n;
      rec.mse = stats.mse;
      rec.variance = stats.variance;
      rec.nvar = n * stats.variance;
      rec.unbiased_bound = rep.f3.divergent ? 0.0 : 1.0 / (n * rep.f3.value);
      rec.f2_bound = rep.f2 > 0.0 ? 1.0 / (n * rep.f2) : 0.0;
      rec.biased_bound = biased_bound(stats, rep.f3.divergent ? 0.0 : n * rep.f3.value);
      rec.violated_unbiased = stats.variance < rec.unbiased_bound - 1e-8;
      rec.violated_f2 = stats.variance < rec.f2_bound - 1e-8;
      // Relative slack absorbs the extrapolation error in the numerical F3;
      // at n = 1 the bound is saturated exactly, so pure absolute slack is
      // too tight.
      rec.holds_biased = stats.variance >= rec.biased_bound * (1.0 - 1e-7) - 1e-9;
      out.push_back(rec);
    }
  }
  return out;
}

EstimatorStats mc_stats(const Estimator& est, int n, double theta, std::uint64_t seed,
                        int draws) {
  const auto [q, dq_dtheta] = q_of_theta(est, theta);
  (void)dq_dtheta;
  check_q(q);
  std::mt19937_64 rng(seed);
  std::binomial_distribution<int> binom(n, q);

  double sum = 0.0, sum_sq = 0.0, sum_err = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double e = est.estimate(binom(rng), n);
    sum += e;
    sum_sq += e * e;
    sum_err += (e - theta) * (e - theta);
  }
  EstimatorStats s;
  s.mean = sum / draws;
  s.bias = s.mean - theta;
  s.variance = sum_sq / draws - s.mean * s.mean;
  s.mse = sum_err / draws;
  s.dmean = std::numeric_limits<double>::quiet_NaN();  // not estimated by MC
  return s;
}

}  // namespace qcrb::estimation
