/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcrb/expr.hpp"
#include "qcrb/numlin.hpp"

namespace qcrb::models {

enum class EigencurveSource { Analytic, Numeric };

/// One eigenvalue curve evaluated at a point: lambda, lambda', lambda''.
struct CurveEval {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool reliable = true;  // false when numeric eigenvector matching is ambiguous
};

/// One-parameter family theta -> (rho_theta, drho_theta/dtheta).
struct ParametricModel {
  std::string name;
  int dim = 0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::function<numlin::Matrix(double)> rho_fn;
  std::function<numlin::Matrix(double)> drho_fn;
  EigencurveSource eigencurve_source = EigencurveSource::Numeric;
  std::vector<expr::ExprAst> eigen_exprs;  // analytic diagonal models only

  bool in_domain(double theta) const { return theta >= theta_min && theta <= theta_max; }
  void require_in_domain(double theta) const;
  numlin::DensityOperator rho_at(double theta) const;
  numlin::HermitianOperator drho_at(double theta) const;
};

/// rho_q = diag(1-q, q) on [0, 1]; rank changes at both endpoints.
ParametricModel builtin_flip();

/// rho_theta = diag(cos^2 theta, sin^2 theta) on [0, pi/2].
ParametricModel builtin_trig();

std::optional<ParametricModel> builtin_by_name(const std::string& name);

struct ModelSpec {
  enum class Kind { Diagonal, Dense };
  std::string name;
  int dim = 0;
  double domain_min = 0.0;
  double domain_max = 0.0;
  Kind kind = Kind::Diagonal;
  std::vector<std::string> eigenvalues;  // Diagonal: one expression per basis state
  // Dense: dim x dim grid of (re, im) expression pairs.
  std::vector<std::vector<std::pair<std::string, std::string>>> entries;
};

/// Parses the JSON model-spec document. Unknown keys are rejected.
ModelSpec parse_model_spec(const std::string& json_text);
ModelSpec load_model_spec(const std::string& path);

/// Realizes a spec as a model; validates trace/Hermiticity/PSD on a 101-point
/// domain grid and reports the worst offending theta on failure.
ParametricModel from_spec(const ModelSpec& spec);

/// Smooth eigenvalue curves with first and second derivatives at theta.
/// Analytic diagonal models follow their declared expressions (no re-sorting);
/// numeric models match eigenvectors across theta +/- h by maximal overlap.
std::vector<CurveEval> eigencurves(const ParametricModel& model, double theta);

}  // namespace qcrb::models
