/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcrb/estimation.hpp"
#include "qcrb/models.hpp"
#include "qcrb/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

bool log_enabled() {
  const char* v = std::getenv("QCRB_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[qcrb] " << msg << '\n';
}

qcrb::models::ParametricModel resolve_model(const std::string& source) {
  if (auto builtin = qcrb::models::builtin_by_name(source)) return *builtin;
  return qcrb::models::from_spec(qcrb::models::load_model_spec(source));
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int n = std::stoi(item);
    if (n < 1) throw std::invalid_argument("--n entries must be >= 1");
    out.push_back(n);
  }
  if (out.empty()) throw std::invalid_argument("--n list is empty");
  return out;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << text;
}

struct CommonOpts {
  std::string model = "trig";
  std::string out;
  std::string format = "csv";
  double rank_tol = -1.0;
  double fd_eps = 1e-3;
};

qcrb::qfi::Tolerances tolerances(const CommonOpts& o) {
  qcrb::qfi::Tolerances cfg;
  cfg.rank_tol = o.rank_tol;
  cfg.f3_eps0 = o.fd_eps;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information and Cramer-Rao bound auditing"};
  app.require_subcommand(1);

  CommonOpts opts;
  double theta = 0.0;
  double from = 0.0, to = 0.0;
  int steps = 101;
  std::string n_list = "10,100,1000";
  std::string figure;
  std::optional<double> ych_eps;
  std::optional<double> purification_thetap;
  bool mc_check = false;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--model", opts.model, "builtin model name (trig|flip) or spec file path");
    cmd->add_option("--out", opts.out, "output file (default: stdout)");
    cmd->add_option("--rank-tol", opts.rank_tol, "rank tolerance (default: scaled 1e-12)");
    cmd->add_option("--fd-eps", opts.fd_eps, "base step for the fidelity difference quotient")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* cmd_eval = app.add_subcommand("eval", "QFI report at a single parameter point");
  add_common(cmd_eval);
  cmd_eval->add_option("--theta", theta, "parameter value")->required();

  CLI::App* cmd_scan = app.add_subcommand("scan", "QFI reports over a parameter grid");
  add_common(cmd_scan);
  cmd_scan->add_option("--from", from, "grid start")->required();
  cmd_scan->add_option("--to", to, "grid end")->required();
  cmd_scan->add_option("--steps", steps, "grid points")->check(CLI::Range(2, 1000000));
  cmd_scan->add_option("--format", opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cmd_repro = app.add_subcommand("reproduce", "bias / variance-vs-bound tables");
  add_common(cmd_repro);
  cmd_repro->add_option("figure", figure, "fig1 or fig2")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2"}));
  cmd_repro->add_option("--n", n_list, "comma-separated sample counts");
  cmd_repro->add_option("--steps", steps, "grid points")->check(CLI::Range(2, 1000000));

  CLI::App* cmd_audit = app.add_subcommand("audit", "estimator error vs bound audit");
  add_common(cmd_audit);
  std::string estimator = "auto";
  cmd_audit->add_option("--from", from, "grid start")->required();
  cmd_audit->add_option("--to", to, "grid end")->required();
  cmd_audit->add_option("--steps", steps, "grid points")->check(CLI::Range(2, 1000000));
  cmd_audit->add_option("--n", n_list, "comma-separated sample counts");
  cmd_audit->add_option("--estimator", estimator, "mle_q, mle_theta, or auto (from the model)")
      ->check(CLI::IsMember({"auto", "mle_q", "mle_theta"}));
  cmd_audit->add_option("--ych-eps", [&](const std::vector<std::string>& v) {
    ych_eps = std::stod(v.at(0));
    return true;
  }, "also emit two-point error-sum bound columns at this offset");
  cmd_audit->add_option("--purification-thetap", [&](const std::vector<std::string>& v) {
    purification_thetap = std::stod(v.at(0));
    return true;
  }, "also emit the two-point amplitude bound against this reference point");
  cmd_audit->add_flag("--mc-check", mc_check, "cross-check exact stats with seeded Monte Carlo");
  cmd_audit->add_option("--seed", seed, "Monte Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    const auto model = resolve_model(opts.model);
    log_line("model " + model.name);

    if (cmd_eval->parsed()) {
      write_output(qcrb::report::eval_keyvalue(model, theta, tolerances(opts)), opts.out);
      return kExitOk;
    }

    if (cmd_scan->parsed()) {
      const auto grid = qcrb::report::linspace(from, to, steps);
      model.require_in_domain(from);
      model.require_in_domain(to);
      const std::string text = opts.format == "json"
                                   ? qcrb::report::scan_json(model, grid, tolerances(opts))
                                   : qcrb::report::scan_csv(model, grid, tolerances(opts));
      write_output(text, opts.out);
      return kExitOk;
    }

    if (cmd_repro->parsed()) {
      const auto ns = parse_n_list(n_list);
      const std::string text = figure == "fig1" ? qcrb::report::fig1_csv(ns, steps)
                                                : qcrb::report::fig2_csv(ns, steps);
      write_output(text, opts.out);
      return kExitOk;
    }

    if (cmd_audit->parsed()) {
      const auto ns = parse_n_list(n_list);
      const auto grid = qcrb::report::linspace(from, to, steps);
      model.require_in_domain(from);
      model.require_in_domain(to);

      qcrb::estimation::Estimator est;
      if (estimator == "mle_q") {
        est = qcrb::estimation::mle_q_estimator();
      } else if (estimator == "mle_theta") {
        est = qcrb::estimation::mle_theta_estimator();
      } else {
        est = model.name == "flip" ? qcrb::estimation::mle_q_estimator()
                                   : qcrb::estimation::mle_theta_estimator();
      }

      const auto audit =
          qcrb::report::audit_csv(model, est, ns, grid, ych_eps, purification_thetap);
      write_output(audit.csv, opts.out);

      if (mc_check) {
        const double mid = grid[grid.size() / 2];
        const auto exact = qcrb::estimation::exact_stats(est, ns.front(), mid);
        const auto mc = qcrb::estimation::mc_stats(est, ns.front(), mid, seed);
        std::cerr << "mc-check at theta=" << qcrb::report::format_g17(mid)
                  << ": exact mean=" << qcrb::report::format_g17(exact.mean)
                  << " mc mean=" << qcrb::report::format_g17(mc.mean)
                  << " exact var=" << qcrb::report::format_g17(exact.variance)
                  << " mc var=" << qcrb::report::format_g17(mc.variance) << '\n';
      }

      std::cerr << "unbiased-violations=" << audit.unbiased_violations
                << " f2-violations=" << audit.f2_violations
                << " biased-violations=" << audit.biased_violations << '\n';
      return audit.biased_violations == 0 ? kExitOk : kExitViolation;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
