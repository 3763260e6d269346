/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcrb/estimation.hpp"
#include "qcrb/models.hpp"
#include "qcrb/qfi.hpp"

namespace qcrb::report {

/// 17-significant-digit decimal rendering used by every emitter.
std::string format_g17(double v);

std::vector<double> linspace(double from, double to, int steps);

/// CSV columns: theta,rank,f1_q,f2,f3,delta,sld_sup,sld_bounded,f3_divergent.
std::string scan_csv(const models::ParametricModel& model, const std::vector<double>& grid,
                     const qfi::Tolerances& cfg = {});

/// Same rows as scan_csv, as a JSON array of objects.
std::string scan_json(const models::ParametricModel& model, const std::vector<double>& grid,
                      const qfi::Tolerances& cfg = {});

std::string eval_keyvalue(const models::ParametricModel& model, double theta,
                          const qfi::Tolerances& cfg = {});

/// Bias curves of the trig-model MLE: columns theta, bias_<n>...
std::string fig1_csv(const std::vector<int>& ns, int steps);

/// Rescaled variances and biased bounds of the trig-model MLE:
/// columns theta, nvar_<n>, biased_bound_<n>..., unbiased_bound.
std::string fig2_csv(const std::vector<int>& ns, int steps);

struct AuditOutput {
  std::string csv;
  int unbiased_violations = 0;
  int f2_violations = 0;
  int biased_violations = 0;
};

AuditOutput audit_csv(const models::ParametricModel& model, const estimation::Estimator& est,
                      const std::vector<int>& ns, const std::vector<double>& grid,
                      std::optional<double> ych_eps = std::nullopt,
                      std::optional<double> purification_thetap = std::nullopt);

}  // namespace qcrb::report
