/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qcrb::models {

using numlin::Complex;
using numlin::Matrix;

void ParametricModel::require_in_domain(double theta) const {
  if (!in_domain(theta)) {
    std::ostringstream os;
    os << "model '" << name << "': theta " << theta << " outside domain [" << theta_min << ", "
       << theta_max << "]";
    throw std::domain_error(os.str());
  }
}

numlin::DensityOperator ParametricModel::rho_at(double theta) const {
  require_in_domain(theta);
  return numlin::DensityOperator(rho_fn(theta));
}

numlin::HermitianOperator ParametricModel::drho_at(double theta) const {
  require_in_domain(theta);
  return numlin::HermitianOperator(drho_fn(theta));
}

ParametricModel builtin_flip() {
  ParametricModel m;
  m.name = "flip";
  m.dim = 2;
  m.theta_min = 0.0;
  m.theta_max = 1.0;
  m.rho_fn = [](double q) {
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0 - q;
    rho(1, 1) = q;
    return rho;
  };
  m.drho_fn = [](double) {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = 1.0;
    return d;
  };
  m.eigencurve_source = EigencurveSource::Analytic;
  m.eigen_exprs = {expr::parse("1 - theta"), expr::parse("theta")};
  return m;
}

ParametricModel builtin_trig() {
  ParametricModel m;
  m.name = "trig";
  m.dim = 2;
  m.theta_min = 0.0;
  m.theta_max = M_PI / 2.0;
  // The double closest to pi/2 carries a cos residue of ~6e-17; the domain
  // endpoint stands for the symbolic pi/2, so evaluate it exactly there.
  auto trig_cs = [](double th) {
    if (th == M_PI / 2.0) return std::pair<double, double>(0.0, 1.0);
    return std::pair<double, double>(std::cos(th), std::sin(th));
  };
  m.rho_fn = [trig_cs](double th) {
    Matrix rho = Matrix::Zero(2, 2);
    const auto [c, s] = trig_cs(th);
    rho(0, 0) = c * c;
    rho(1, 1) = s * s;
    return rho;
  };
  m.drho_fn = [trig_cs](double th) {
    Matrix d = Matrix::Zero(2, 2);
    const auto [c, s] = trig_cs(th);
    d(0, 0) = -2.0 * s * c;
    d(1, 1) = 2.0 * s * c;
    return d;
  };
  m.eigencurve_source = EigencurveSource::Analytic;
  m.eigen_exprs = {expr::parse("cos(theta)^2"), expr::parse("sin(theta)^2")};
  return m;
}

std::optional<ParametricModel> builtin_by_name(const std::string& name) {
  if (name == "flip") return builtin_flip();
  if (name == "trig") return builtin_trig();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Model-spec loading

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw std::invalid_argument("model spec: unknown key '" + it.key() + "'");
  }
}

}  // namespace

ModelSpec parse_model_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model spec: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("model spec: top level must be an object");
  reject_unknown_keys(j, {"name", "dim", "domain", "kind", "eigenvalues", "entries"});

  ModelSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.dim = j.at("dim").get<int>();
  if (spec.dim < 1 || spec.dim > 64) throw std::invalid_argument("model spec: dim must be in [1, 64]");
  const auto& dom = j.at("domain");
  if (!dom.is_array() || dom.size() != 2) {
    throw std::invalid_argument("model spec: domain must be [min, max]");
  }
  spec.domain_min = dom[0].get<double>();
  spec.domain_max = dom[1].get<double>();
  if (!(spec.domain_min < spec.domain_max)) {
    throw std::invalid_argument("model spec: domain min must be < max");
  }

  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "diagonal") {
    spec.kind = ModelSpec::Kind::Diagonal;
    const auto& eig = j.at("eigenvalues");
    if (!eig.is_array() || static_cast<int>(eig.size()) != spec.dim) {
      throw std::invalid_argument("model spec: eigenvalues must list dim expressions");
    }
    for (const auto& e : eig) spec.eigenvalues.push_back(e.get<std::string>());
    if (j.contains("entries")) throw std::invalid_argument("model spec: diagonal kind takes no entries");
  } else if (kind == "dense") {
    spec.kind = ModelSpec::Kind::Dense;
    const auto& rows = j.at("entries");
    if (!rows.is_array() || static_cast<int>(rows.size()) != spec.dim) {
      throw std::invalid_argument("model spec: entries must be a dim x dim grid");
    }
    for (const auto& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != spec.dim) {
        throw std::invalid_argument("model spec: entries must be a dim x dim grid");
      }
      std::vector<std::pair<std::string, std::string>> out_row;
      for (const auto& cell : row) {
        if (!cell.is_object()) throw std::invalid_argument("model spec: entry must be {re, im}");
        reject_unknown_keys(cell, {"re", "im"});
        out_row.emplace_back(cell.at("re").get<std::string>(), cell.at("im").get<std::string>());
      }
      spec.entries.push_back(std::move(out_row));
    }
    if (j.contains("eigenvalues")) throw std::invalid_argument("model spec: dense kind takes no eigenvalues");
  } else {
    throw std::invalid_argument("model spec: kind must be 'diagonal' or 'dense'");
  }
  return spec;
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("model spec: cannot open file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_spec(buf.str());
}

namespace {

constexpr int kValidationGridPoints = 101;

Matrix eval_dense_raw(const std::vector<std::vector<std::pair<expr::ExprAst, expr::ExprAst>>>& asts,
                      double theta, Matrix* deriv) {
  const int d = static_cast<int>(asts.size());
  Matrix m(d, d);
  if (deriv) deriv->resize(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const expr::Dual2 re = expr::eval_dual2(asts[j][k].first, theta);
      const expr::Dual2 im = expr::eval_dual2(asts[j][k].second, theta);
      m(j, k) = Complex(re.v, im.v);
      if (deriv) (*deriv)(j, k) = Complex(re.d1, im.d1);
    }
  }
  return m;
}

}  // namespace

ParametricModel from_spec(const ModelSpec& spec) {
  ParametricModel m;
  m.name = spec.name;
  m.dim = spec.dim;
  m.theta_min = spec.domain_min;
  m.theta_max = spec.domain_max;

  if (spec.kind == ModelSpec::Kind::Diagonal) {
    auto exprs = std::make_shared<std::vector<expr::ExprAst>>();
    for (const auto& s : spec.eigenvalues) exprs->push_back(expr::parse(s));

    // Validation grid: eigenvalues sum to 1 and stay nonnegative.
    double worst_dev = 0.0, worst_theta = spec.domain_min;
    for (int i = 0; i < kValidationGridPoints; ++i) {
      const double th = spec.domain_min +
                        (spec.domain_max - spec.domain_min) * i / (kValidationGridPoints - 1);
      double sum = 0.0, min_eig = 0.0;
      for (const auto& e : *exprs) {
        const double v = expr::eval_value(e, th);
        sum += v;
        min_eig = std::min(min_eig, v);
      }
      const double dev = std::max(std::abs(sum - 1.0), -min_eig);
      if (dev > worst_dev) {
        worst_dev = dev;
        worst_theta = th;
      }
    }
    if (worst_dev > 1e-10) {
      std::ostringstream os;
      os << "model spec '" << spec.name << "': diagonal eigenvalues invalid (deviation "
         << worst_dev << " at theta=" << worst_theta << ")";
      throw std::invalid_argument(os.str());
    }

    const int d = spec.dim;
    m.rho_fn = [exprs, d](double th) {
      Matrix rho = Matrix::Zero(d, d);
      double sum = 0.0;
      std::vector<double> vals(d);
      for (int j = 0; j < d; ++j) {
        vals[j] = expr::eval_value((*exprs)[j], th);
        sum += vals[j];
      }
      for (int j = 0; j < d; ++j) rho(j, j) = std::max(vals[j], 0.0) / sum;
      return rho;
    };
    m.drho_fn = [exprs, d](double th) {
      Matrix drho = Matrix::Zero(d, d);
      double sum = 0.0, dsum = 0.0;
      std::vector<expr::Dual2> vals(d);
      for (int j = 0; j < d; ++j) {
        vals[j] = expr::eval_dual2((*exprs)[j], th);
        sum += vals[j].v;
        dsum += vals[j].d1;
      }
      for (int j = 0; j < d; ++j) {
        drho(j, j) = (vals[j].d1 * sum - vals[j].v * dsum) / (sum * sum);
      }
      return drho;
    };
    m.eigencurve_source = EigencurveSource::Analytic;
    m.eigen_exprs = *exprs;
    return m;
  }

  // Dense model.
  auto asts = std::make_shared<std::vector<std::vector<std::pair<expr::ExprAst, expr::ExprAst>>>>();
  for (const auto& row : spec.entries) {
    std::vector<std::pair<expr::ExprAst, expr::ExprAst>> out_row;
    for (const auto& [re, im] : row) out_row.emplace_back(expr::parse(re), expr::parse(im));
    asts->push_back(std::move(out_row));
  }

  double worst_dev = 0.0, worst_theta = spec.domain_min;
  for (int i = 0; i < kValidationGridPoints; ++i) {
    const double th = spec.domain_min +
                      (spec.domain_max - spec.domain_min) * i / (kValidationGridPoints - 1);
    const Matrix raw = eval_dense_raw(*asts, th, nullptr);
    double dev = std::abs(raw.trace().real() - 1.0);
    dev = std::max(dev, std::abs(raw.trace().imag()));
    for (int j = 0; j < spec.dim; ++j) {
      for (int k = j; k < spec.dim; ++k) {
        dev = std::max(dev, std::abs(raw(j, k) - std::conj(raw(k, j))));
      }
    }
    const Matrix herm = ((raw + raw.adjoint()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    dev = std::max(dev, -es.eigenvalues().minCoeff());
    if (dev > worst_dev) {
      worst_dev = dev;
      worst_theta = th;
    }
  }
  if (worst_dev > 1e-10) {
    std::ostringstream os;
    os << "model spec '" << spec.name << "': dense grid invalid (deviation " << worst_dev
       << " at theta=" << worst_theta << ")";
    throw std::invalid_argument(os.str());
  }

  m.rho_fn = [asts](double th) {
    Matrix raw = eval_dense_raw(*asts, th, nullptr);
    Matrix herm = ((raw + raw.adjoint()) / 2.0).eval();
    return (herm / herm.trace().real()).eval();
  };
  m.drho_fn = [asts](double th) {
    Matrix deriv;
    Matrix raw = eval_dense_raw(*asts, th, &deriv);
    const Matrix herm = ((raw + raw.adjoint()) / 2.0).eval();
    const Matrix dherm = ((deriv + deriv.adjoint()) / 2.0).eval();
    const double tr = herm.trace().real();
    const double dtr = dherm.trace().real();
    return ((dherm * tr - herm * dtr) / (tr * tr)).eval();
  };
  m.eigencurve_source = EigencurveSource::Numeric;
  return m;
}

// ---------------------------------------------------------------------------
// Eigenvalue curves

namespace {

// Match each reference eigenvector (column of ref) to an eigenvalue of the
// decomposition at a probe point by maximal overlap. Flags ambiguity when the
// two largest overlaps are within 0.05 of each other.
std::vector<double> matched_eigenvalues(const Matrix& ref_vecs,
                                        const numlin::SpectralDecomposition& probe,
                                        bool* ambiguous) {
  const int d = static_cast<int>(ref_vecs.cols());
  std::vector<double> out(d);
  for (int j = 0; j < d; ++j) {
    double best = -1.0, second = -1.0;
    int best_i = 0;
    for (int i = 0; i < d; ++i) {
      const double overlap = std::abs((ref_vecs.col(j).adjoint() * probe.eigenvectors.col(i))(0, 0));
      if (overlap > best) {
        second = best;
        best = overlap;
        best_i = i;
      } else if (overlap > second) {
        second = overlap;
      }
    }
    if (second >= 0.0 && best - second < 0.05) *ambiguous = true;
    out[j] = probe.eigenvalues(best_i);
  }
  return out;
}

}  // namespace

std::vector<CurveEval> eigencurves(const ParametricModel& model, double theta) {
  model.require_in_domain(theta);

  if (model.eigencurve_source == EigencurveSource::Analytic) {
    std::vector<CurveEval> out;
    out.reserve(model.eigen_exprs.size());
    for (const auto& e : model.eigen_exprs) {
      const expr::Dual2 d = expr::eval_dual2(e, theta);
      out.push_back({d.v, d.d1, d.d2, true});
    }
    return out;
  }

  const double h = 1e-4 * std::max(1.0, std::abs(theta));
  const auto ref = numlin::eigh(model.rho_at(theta).op());
  bool ambiguous = false;
  auto lam = [&](double t) {
    return matched_eigenvalues(ref.eigenvectors, numlin::eigh(model.rho_at(t).op()), &ambiguous);
  };

  const int d = model.dim;
  std::vector<CurveEval> out(d);
  std::vector<double> l0(d);
  for (int j = 0; j < d; ++j) l0[j] = ref.eigenvalues(j);

  if (theta - 2.0 * h >= model.theta_min && theta + 2.0 * h <= model.theta_max) {
    const auto lp = lam(theta + h), lm = lam(theta - h);
    const auto lp2 = lam(theta + 2.0 * h), lm2 = lam(theta - 2.0 * h);
    for (int j = 0; j < d; ++j) {
      out[j].value = l0[j];
      out[j].d1 = (lp[j] - lm[j]) / (2.0 * h);
      out[j].d2 =
          (-lp2[j] + 16.0 * lp[j] - 30.0 * l0[j] + 16.0 * lm[j] - lm2[j]) / (12.0 * h * h);
    }
  } else {
    // One-sided stencils of matching (second) order at the boundary.
    const double s = (theta - 2.0 * h < model.theta_min) ? 1.0 : -1.0;
    const auto l1 = lam(theta + s * h), l2 = lam(theta + 2.0 * s * h), l3 = lam(theta + 3.0 * s * h);
    for (int j = 0; j < d; ++j) {
      out[j].value = l0[j];
      out[j].d1 = s * (-3.0 * l0[j] + 4.0 * l1[j] - l2[j]) / (2.0 * h);
      out[j].d2 = (2.0 * l0[j] - 5.0 * l1[j] + 4.0 * l2[j] - l3[j]) / (h * h);
    }
  }
  for (auto& c : out) c.reliable = !ambiguous;
  return out;
}

}  // namespace qcrb::models
