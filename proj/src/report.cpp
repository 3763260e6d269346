/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qcrb::report {

std::string format_g17(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double from, double to, int steps) {
  if (steps < 2) throw std::invalid_argument("linspace: steps must be >= 2");
  if (!(from < to)) throw std::invalid_argument("linspace: from must be < to");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = from + (to - from) * i / (steps - 1);
  out.back() = to;
  return out;
}

namespace {

struct ScanRow {
  double theta;
  int rank;
  std::string f1_q, f2, f3, delta, sld_sup;
  bool sld_bounded, f3_divergent;
};

ScanRow make_row(const models::ParametricModel& model, double theta, const qfi::Tolerances& cfg) {
  const qfi::QfiReport r = qfi::qfi_report(model, theta, cfg);
  ScanRow row;
  row.theta = r.theta;
  row.rank = r.rank;
  row.f1_q = r.f1_divergent ? "inf" : format_g17(r.f1_q);
  row.f2 = format_g17(r.f2);
  row.f3 = r.f3.divergent ? "inf" : format_g17(r.f3.value);
  row.delta = format_g17(r.delta.value);
  row.sld_sup = format_g17(r.sld_sup_element);
  row.sld_bounded = r.sld_bounded;
  row.f3_divergent = r.f3.divergent;
  return row;
}

}  // namespace

std::string scan_csv(const models::ParametricModel& model, const std::vector<double>& grid,
                     const qfi::Tolerances& cfg) {
  std::ostringstream os;
  os << "theta,rank,f1_q,f2,f3,delta,sld_sup,sld_bounded,f3_divergent\n";
  for (double theta : grid) {
    const ScanRow r = make_row(model, theta, cfg);
    os << format_g17(r.theta) << ',' << r.rank << ',' << r.f1_q << ',' << r.f2 << ',' << r.f3
       << ',' << r.delta << ',' << r.sld_sup << ',' << (r.sld_bounded ? 1 : 0) << ','
       << (r.f3_divergent ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string scan_json(const models::ParametricModel& model, const std::vector<double>& grid,
                      const qfi::Tolerances& cfg) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (double theta : grid) {
    const ScanRow r = make_row(model, theta, cfg);
    nlohmann::ordered_json row;
    row["theta"] = r.theta;
    row["rank"] = r.rank;
    row["f1_q"] = r.f1_q == "inf" ? nlohmann::ordered_json("inf")
                                  : nlohmann::ordered_json(std::stod(r.f1_q));
    row["f2"] = std::stod(r.f2);
    row["f3"] = r.f3 == "inf" ? nlohmann::ordered_json("inf")
                              : nlohmann::ordered_json(std::stod(r.f3));
    row["delta"] = std::stod(r.delta);
    row["sld_sup"] = std::stod(r.sld_sup);
    row["sld_bounded"] = r.sld_bounded;
    row["f3_divergent"] = r.f3_divergent;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string eval_keyvalue(const models::ParametricModel& model, double theta,
                          const qfi::Tolerances& cfg) {
  const qfi::QfiReport r = qfi::qfi_report(model, theta, cfg);
  std::ostringstream os;
  os << "theta=" << format_g17(r.theta) << '\n';
  os << "rank=" << r.rank << '\n';
  os << "is_singular=" << (r.is_singular ? 1 : 0) << '\n';
  os << "f1_q=" << (r.f1_divergent ? "inf" : format_g17(r.f1_q)) << '\n';
  os << "f2=" << format_g17(r.f2) << '\n';
  os << "f3=" << (r.f3.divergent ? "inf" : format_g17(r.f3.value)) << '\n';
  os << "f3_divergent=" << (r.f3.divergent ? 1 : 0) << '\n';
  os << "f3_symmetric=" << format_g17(r.f3.symmetric) << '\n';
  os << "delta=" << format_g17(r.delta.value) << '\n';
  os << "sld_sup=" << format_g17(r.sld_sup_element) << '\n';
  os << "sld_bounded=" << (r.sld_bounded ? 1 : 0) << '\n';
  return os.str();
}

std::string fig1_csv(const std::vector<int>& ns, int steps) {
  const auto model = models::builtin_trig();
  const auto grid = linspace(model.theta_min, model.theta_max, steps);
  const auto est = estimation::mle_theta_estimator();

  std::ostringstream os;
  os << "theta";
  for (int n : ns) os << ",bias_" << n;
  os << '\n';
  for (double theta : grid) {
    os << format_g17(theta);
    for (int n : ns) os << ',' << format_g17(estimation::exact_stats(est, n, theta).bias);
    os << '\n';
  }
  return os.str();
}

std::string fig2_csv(const std::vector<int>& ns, int steps) {
  const auto model = models::builtin_trig();
  const auto grid = linspace(model.theta_min, model.theta_max, steps);
  const auto est = estimation::mle_theta_estimator();

  std::ostringstream os;
  os << "theta";
  for (int n : ns) os << ",nvar_" << n << ",biased_bound_" << n;
  os << ",unbiased_bound\n";
  for (double theta : grid) {
    os << format_g17(theta);
    for (int n : ns) {
      const auto stats = estimation::exact_stats(est, n, theta);
      // Rescaled by n: the per-copy QFI of the trig model is 4.
      os << ',' << format_g17(n * stats.variance) << ','
         << format_g17(n * estimation::biased_bound(stats, 4.0 * n));
    }
    os << ',' << format_g17(0.25) << '\n';
  }
  return os.str();
}

AuditOutput audit_csv(const models::ParametricModel& model, const estimation::Estimator& est,
                      const std::vector<int>& ns, const std::vector<double>& grid,
                      std::optional<double> ych_eps, std::optional<double> purification_thetap) {
  const auto records = estimation::audit_scan(model, est, ns, grid);

  AuditOutput out;
  std::ostringstream os;
  os << "theta,n,mse,variance,nvar,unbiased_bound,f2_bound,biased_bound,"
        "violated_unbiased,violated_f2,holds_biased";
  if (ych_eps) os << ",ych_lhs,ych_rhs";
  if (purification_thetap) os << ",purification_bound";
  os << '\n';

  for (const auto& rec : records) {
    os << format_g17(rec.theta) << ',' << rec.n << ',' << format_g17(rec.mse) << ','
       << format_g17(rec.variance) << ',' << format_g17(rec.nvar) << ','
       << format_g17(rec.unbiased_bound) << ',' << format_g17(rec.f2_bound) << ','
       << format_g17(rec.biased_bound) << ',' << (rec.violated_unbiased ? 1 : 0) << ','
       << (rec.violated_f2 ? 1 : 0) << ',' << (rec.holds_biased ? 1 : 0);
    if (ych_eps) {
      const double eps = std::min(*ych_eps, model.theta_max - rec.theta);
      const auto ych = estimation::ych_check(rec.n, est, rec.theta, eps);
      os << ',' << format_g17(ych.lhs) << ',' << format_g17(ych.rhs);
    }
    if (purification_thetap) {
      os << ',' << format_g17(estimation::purification_bound(rec.n, est, rec.theta,
                                                             *purification_thetap));
    }
    os << '\n';
    if (rec.violated_unbiased) ++out.unbiased_violations;
    if (rec.violated_f2) ++out.f2_violations;
    if (!rec.holds_biased) ++out.biased_violations;
  }
  out.csv = os.str();
  return out;
}

}  // namespace qcrb::report
