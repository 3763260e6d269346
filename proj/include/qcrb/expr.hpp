/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcrb::expr {

/// Second-order dual number: value, first and second derivative w.r.t. theta.
struct Dual2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline Dual2 constant(double c) { return {c, 0.0, 0.0}; }
inline Dual2 variable(double theta) { return {theta, 1.0, 0.0}; }

Dual2 operator+(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a);
Dual2 operator*(const Dual2& a, const Dual2& b);
Dual2 operator/(const Dual2& a, const Dual2& b);

Dual2 d_sin(const Dual2& u);
Dual2 d_cos(const Dual2& u);
Dual2 d_tan(const Dual2& u);
Dual2 d_cot(const Dual2& u);
Dual2 d_sqrt(const Dual2& u);
Dual2 d_exp(const Dual2& u);
Dual2 d_log(const Dual2& u);
Dual2 d_arcsin(const Dual2& u);
Dual2 d_arccos(const Dual2& u);
Dual2 d_abs(const Dual2& u);
Dual2 d_pow_int(const Dual2& base, long long e);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos) : std::runtime_error(msg), position(pos) {}
  std::size_t position;
};

/// Thrown when evaluation leaves the real domain (sqrt/log/arcsin/...).
/// Carries the offending subexpression as printed text.
struct EvalDomainError : std::runtime_error {
  EvalDomainError(const std::string& msg, std::string subexpr)
      : std::runtime_error(msg + " in subexpression " + subexpr), subexpression(std::move(subexpr)) {}
  std::string subexpression;
};

namespace detail {
struct Node;
}

/// Immutable expression tree over a single variable (`theta` or `x`).
class ExprAst {
public:
  ExprAst() = default;
  explicit ExprAst(std::shared_ptr<const detail::Node> root) : root_(std::move(root)) {}
  const detail::Node* root() const { return root_.get(); }
  bool empty() const { return root_ == nullptr; }

private:
  std::shared_ptr<const detail::Node> root_;
};

ExprAst parse(std::string_view text);
std::string print(const ExprAst& ast);
Dual2 eval_dual2(const ExprAst& ast, double theta);
double eval_value(const ExprAst& ast, double theta);
bool structurally_equal(const ExprAst& a, const ExprAst& b);

}  // namespace qcrb::expr
