/*
 * This code is part of qcrb-audit.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "qcrb/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace qcrb::expr {

// ---------------------------------------------------------------------------
// Dual2 arithmetic

Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }

Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Dual2 operator/(const Dual2& a, const Dual2& b) {
  const double w = a.v / b.v;
  const double w1 = (a.d1 - w * b.d1) / b.v;
  const double w2 = (a.d2 - 2.0 * w1 * b.d1 - w * b.d2) / b.v;
  return {w, w1, w2};
}

namespace {
// f(u) with f', f'' at u.v.
Dual2 chain(const Dual2& u, double f, double fp, double fpp) {
  return {f, fp * u.d1, fpp * u.d1 * u.d1 + fp * u.d2};
}
}  // namespace

Dual2 d_sin(const Dual2& u) { return chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v)); }
Dual2 d_cos(const Dual2& u) { return chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v)); }

Dual2 d_tan(const Dual2& u) {
  const double t = std::tan(u.v);
  const double sec2 = 1.0 + t * t;
  return chain(u, t, sec2, 2.0 * t * sec2);
}

Dual2 d_cot(const Dual2& u) {
  const double c = 1.0 / std::tan(u.v);
  const double csc2 = 1.0 + c * c;
  return chain(u, c, -csc2, 2.0 * c * csc2);
}

Dual2 d_sqrt(const Dual2& u) {
  const double r = std::sqrt(u.v);
  return chain(u, r, 0.5 / r, -0.25 / (r * u.v));
}

Dual2 d_exp(const Dual2& u) {
  const double e = std::exp(u.v);
  return chain(u, e, e, e);
}

Dual2 d_log(const Dual2& u) {
  return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
}

Dual2 d_arcsin(const Dual2& u) {
  const double s = 1.0 - u.v * u.v;
  const double r = std::sqrt(s);
  return chain(u, std::asin(u.v), 1.0 / r, u.v / (s * r));
}

Dual2 d_arccos(const Dual2& u) {
  const double s = 1.0 - u.v * u.v;
  const double r = std::sqrt(s);
  return chain(u, std::acos(u.v), -1.0 / r, -u.v / (s * r));
}

Dual2 d_abs(const Dual2& u) {
  const double sg = u.v < 0.0 ? -1.0 : 1.0;
  return {std::abs(u.v), sg * u.d1, sg * u.d2};
}

Dual2 d_pow_int(const Dual2& base, long long e) {
  if (e == 0) return constant(1.0);
  if (e < 0) return constant(1.0) / d_pow_int(base, -e);
  Dual2 acc = constant(1.0);
  Dual2 b = base;
  long long n = e;
  while (n > 0) {
    if (n & 1) acc = acc * b;
    b = b * b;
    n >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// AST

namespace detail {

enum class Kind { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Fn { Sin, Cos, Tan, Cot, Sqrt, Exp, Log, Arcsin, Arccos, Abs };

struct Node {
  Kind kind;
  double value = 0.0;           // Literal
  Fn fn = Fn::Sin;              // Call
  std::shared_ptr<const Node> lhs;  // unary operand lives here
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Cot: return "cot";
    case Fn::Sqrt: return "sqrt";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Arcsin: return "arcsin";
    case Fn::Arccos: return "arccos";
    case Fn::Abs: return "abs";
  }
  return "?";
}

bool fn_by_name(std::string_view s, Fn& out) {
  static const std::pair<std::string_view, Fn> table[] = {
      {"sin", Fn::Sin},     {"cos", Fn::Cos},       {"tan", Fn::Tan},
      {"cot", Fn::Cot},     {"sqrt", Fn::Sqrt},     {"exp", Fn::Exp},
      {"log", Fn::Log},     {"arcsin", Fn::Arcsin}, {"arccos", Fn::Arccos},
      {"abs", Fn::Abs}};
  for (const auto& [name, fn] : table) {
    if (s == name) {
      out = fn;
      return true;
    }
  }
  return false;
}

}  // namespace detail

using detail::Fn;
using detail::Kind;
using detail::Node;
using detail::NodePtr;

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | ident | ident '(' expr ')' | '(' expr ')' | '-' base

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("expected operator or end of input");
    return e;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) {
    std::ostringstream os;
    os << "syntax error at position " << pos_ << ": " << expected;
    throw ParseError(os.str(), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr n = parse_term();
    for (;;) {
      if (accept('+')) {
        n = detail::make(Kind::Add, n, parse_term());
      } else if (accept('-')) {
        n = detail::make(Kind::Sub, n, parse_term());
      } else {
        return n;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr n = parse_unary();
    for (;;) {
      if (accept('*')) {
        n = detail::make(Kind::Mul, n, parse_unary());
      } else if (accept('/')) {
        n = detail::make(Kind::Div, n, parse_unary());
      } else {
        return n;
      }
    }
  }

  // '^' binds tighter than unary '-', so -theta^2 parses as -(theta^2).
  NodePtr parse_unary() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '-') {
      ++pos_;
      return detail::make(Kind::Neg, parse_unary());
    }
    return parse_factor();
  }

  NodePtr parse_factor() {
    NodePtr b = parse_base();
    if (accept('^')) {
      return detail::make(Kind::Pow, b, parse_unary());  // right associative
    }
    return b;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected number, identifier, '(' or '-'");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_ident();
    }
    fail("expected number, identifier, '(' or '-'");
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("expected number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Literal;
    n->value = value;
    return n;
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "theta" || name == "x") {
      return detail::make(Kind::Variable);
    }
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Literal;
      n->value = M_PI;
      return n;
    }
    Fn fn;
    if (detail::fn_by_name(name, fn)) {
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = parse_expr();
      if (!accept(')')) fail("expected ')'");
      auto n = detail::make(Kind::Call, arg);
      auto mut = std::const_pointer_cast<Node>(n);
      mut->fn = fn;
      return n;
    }
    pos_ = start;
    std::ostringstream os;
    os << "unknown identifier '" << name << "' at position " << start;
    throw ParseError(os.str(), start);
  }
};

}  // namespace

ExprAst parse(std::string_view text) { return ExprAst(Parser(text).run()); }

// ---------------------------------------------------------------------------
// Printer: fully parenthesized canonical form, round-trips through parse().

namespace {

void print_node(const Node* n, std::ostringstream& os) {
  switch (n->kind) {
    case Kind::Literal: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      os << buf;
      return;
    }
    case Kind::Variable:
      os << "theta";
      return;
    case Kind::Neg:
      os << "(-";
      print_node(n->lhs.get(), os);
      os << ")";
      return;
    case Kind::Call:
      os << detail::fn_name(n->fn) << "(";
      print_node(n->lhs.get(), os);
      os << ")";
      return;
    default: {
      const char* op = n->kind == Kind::Add   ? "+"
                       : n->kind == Kind::Sub ? "-"
                       : n->kind == Kind::Mul ? "*"
                       : n->kind == Kind::Div ? "/"
                                              : "^";
      os << "(";
      print_node(n->lhs.get(), os);
      os << op;
      print_node(n->rhs.get(), os);
      os << ")";
      return;
    }
  }
}

std::string print_subtree(const Node* n) {
  std::ostringstream os;
  print_node(n, os);
  return os.str();
}

Dual2 eval_node(const Node* n, double theta) {
  switch (n->kind) {
    case Kind::Literal:
      return constant(n->value);
    case Kind::Variable:
      return variable(theta);
    case Kind::Neg:
      return -eval_node(n->lhs.get(), theta);
    case Kind::Add:
      return eval_node(n->lhs.get(), theta) + eval_node(n->rhs.get(), theta);
    case Kind::Sub:
      return eval_node(n->lhs.get(), theta) - eval_node(n->rhs.get(), theta);
    case Kind::Mul:
      return eval_node(n->lhs.get(), theta) * eval_node(n->rhs.get(), theta);
    case Kind::Div: {
      Dual2 num = eval_node(n->lhs.get(), theta);
      Dual2 den = eval_node(n->rhs.get(), theta);
      if (den.v == 0.0) throw EvalDomainError("division by zero", print_subtree(n));
      return num / den;
    }
    case Kind::Pow: {
      Dual2 base = eval_node(n->lhs.get(), theta);
      // Literal integer exponent keeps the power rule total (cos(theta)^2 at
      // points where the base vanishes or goes negative).
      if (n->rhs->kind == Kind::Literal) {
        const double e = n->rhs->value;
        if (e == std::floor(e) && std::abs(e) <= 1e6) {
          return d_pow_int(base, static_cast<long long>(e));
        }
      }
      if (base.v <= 0.0) {
        throw EvalDomainError("non-integer power of non-positive base", print_subtree(n));
      }
      return d_exp(eval_node(n->rhs.get(), theta) * d_log(base));
    }
    case Kind::Call: {
      Dual2 u = eval_node(n->lhs.get(), theta);
      switch (n->fn) {
        case Fn::Sin: return d_sin(u);
        case Fn::Cos: return d_cos(u);
        case Fn::Tan: return d_tan(u);
        case Fn::Cot:
          if (std::sin(u.v) == 0.0) throw EvalDomainError("cot at multiple of pi", print_subtree(n));
          return d_cot(u);
        case Fn::Sqrt:
          if (u.v < 0.0) throw EvalDomainError("sqrt of negative value", print_subtree(n));
          return d_sqrt(u);
        case Fn::Exp: return d_exp(u);
        case Fn::Log:
          if (u.v <= 0.0) throw EvalDomainError("log of non-positive value", print_subtree(n));
          return d_log(u);
        case Fn::Arcsin:
          if (u.v < -1.0 || u.v > 1.0) throw EvalDomainError("arcsin argument outside [-1,1]", print_subtree(n));
          return d_arcsin(u);
        case Fn::Arccos:
          if (u.v < -1.0 || u.v > 1.0) throw EvalDomainError("arccos argument outside [-1,1]", print_subtree(n));
          return d_arccos(u);
        case Fn::Abs: return d_abs(u);
      }
      throw std::logic_error("unreachable");
    }
  }
  throw std::logic_error("unreachable");
}

bool equal_node(const Node* a, const Node* b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Literal:
      return a->value == b->value;
    case Kind::Variable:
      return true;
    case Kind::Neg:
      return equal_node(a->lhs.get(), b->lhs.get());
    case Kind::Call:
      return a->fn == b->fn && equal_node(a->lhs.get(), b->lhs.get());
    default:
      return equal_node(a->lhs.get(), b->lhs.get()) && equal_node(a->rhs.get(), b->rhs.get());
  }
}

}  // namespace

std::string print(const ExprAst& ast) {
  if (ast.empty()) throw std::invalid_argument("print: empty expression");
  return print_subtree(ast.root());
}

Dual2 eval_dual2(const ExprAst& ast, double theta) {
  if (ast.empty()) throw std::invalid_argument("eval_dual2: empty expression");
  return eval_node(ast.root(), theta);
}

double eval_value(const ExprAst& ast, double theta) { return eval_dual2(ast, theta).v; }

bool structurally_equal(const ExprAst& a, const ExprAst& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return equal_node(a.root(), b.root());
}

}  // namespace qcrb::expr
