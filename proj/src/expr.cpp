/*
Copyright 2026 The hpdiss Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "hpdiss/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace hpdiss {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::size_t index = 0;
  int exponent = 0;
  Expr a{std::shared_ptr<const Node>{}};
  Expr b{std::shared_ptr<const Node>{}};
};

namespace {

double ipow(double base, int k) {
  if (k < 0) return 1.0 / ipow(base, -k);
  double result = 1.0;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

long long ipow_exact(long long base, int k) {
  long long result = 1;
  for (int i = 0; i < k; ++i) result *= base;
  return result;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
std::size_t Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::is_constant(double v) const {
  return node_->kind == Kind::Constant && node_->value == v;
}

// The operators fold constants and drop additive/multiplicative identities so
// that derivative trees stay small. Folding is skipped when it would produce a
// non-finite constant.
Expr operator+(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant)
    return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Sum;
  n->a = a;
  n->b = b;
  return Expr(std::move(n));
}

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Constant) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::Negation) return a.lhs();
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Negation;
  n->a = a;
  return Expr(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant)
    return Expr::constant(a.value() - b.value());
  return a + (-b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant)
    return Expr::constant(a.value() * b.value());
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Product;
  n->a = a;
  n->b = b;
  return Expr(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::Constant && b.kind() == Expr::Kind::Constant &&
      b.value() != 0.0)
    return Expr::constant(a.value() / b.value());
  if (b.is_constant(1.0)) return a;
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Quotient;
  n->a = a;
  n->b = b;
  return Expr(std::move(n));
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.kind() == Expr::Kind::Constant) {
    const double v = ipow(base.value(), exponent);
    if (std::isfinite(v)) return Expr::constant(v);
  }
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Power;
  n->a = base;
  n->exponent = exponent;
  return Expr(std::move(n));
}

std::size_t Expr::arity() const {
  switch (kind()) {
    case Kind::Constant:
      return 0;
    case Kind::Variable:
      return var_index() + 1;
    case Kind::Power:
    case Kind::Negation:
      return lhs().arity();
    default:
      return std::max(lhs().arity(), rhs().arity());
  }
}

double Expr::eval(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Variable:
      if (n.index >= x.size())
        throw std::out_of_range("expression reads state entry " +
                                std::to_string(n.index) + " of a point with " +
                                std::to_string(x.size()) + " entries");
      return x[n.index];
    case Kind::Sum:
      return n.a.eval(x) + n.b.eval(x);
    case Kind::Product:
      return n.a.eval(x) * n.b.eval(x);
    case Kind::Quotient:
      return n.a.eval(x) / n.b.eval(x);
    case Kind::Power:
      return ipow(n.a.eval(x), n.exponent);
    case Kind::Negation:
      return -n.a.eval(x);
  }
  return 0.0;
}

Expr Expr::differentiate(std::size_t var) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return constant(0.0);
    case Kind::Variable:
      return constant(n.index == var ? 1.0 : 0.0);
    case Kind::Sum:
      return n.a.differentiate(var) + n.b.differentiate(var);
    case Kind::Product:
      return n.a.differentiate(var) * n.b + n.a * n.b.differentiate(var);
    case Kind::Quotient: {
      const Expr da = n.a.differentiate(var);
      const Expr db = n.b.differentiate(var);
      return da / n.b - n.a * db / pow(n.b, 2);
    }
    case Kind::Power:
      return constant(n.exponent) * pow(n.a, n.exponent - 1) *
             n.a.differentiate(var);
    case Kind::Negation:
      return -n.a.differentiate(var);
  }
  return constant(0.0);
}

Expr Expr::substitute(std::span<const Expr> replacements) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant:
      return *this;
    case Kind::Variable:
      if (n.index >= replacements.size())
        throw std::out_of_range("no replacement for variable " +
                                std::to_string(n.index));
      return replacements[n.index];
    case Kind::Sum:
      return n.a.substitute(replacements) + n.b.substitute(replacements);
    case Kind::Product:
      return n.a.substitute(replacements) * n.b.substitute(replacements);
    case Kind::Quotient:
      return n.a.substitute(replacements) / n.b.substitute(replacements);
    case Kind::Power:
      return pow(n.a.substitute(replacements), n.exponent);
    case Kind::Negation:
      return -n.a.substitute(replacements);
  }
  return *this;
}

std::string Expr::to_string(std::span<const std::string> names) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", std::fabs(n.value));
      return std::signbit(n.value) ? "(-" + std::string(buf) + ")"
                                   : std::string(buf);
    }
    case Kind::Variable:
      if (n.index < names.size()) return names[n.index];
      return "x" + std::to_string(n.index + 1);
    case Kind::Sum:
      return "(" + n.a.to_string(names) + " + " + n.b.to_string(names) + ")";
    case Kind::Product:
      return "(" + n.a.to_string(names) + " * " + n.b.to_string(names) + ")";
    case Kind::Quotient:
      return "(" + n.a.to_string(names) + " / " + n.b.to_string(names) + ")";
    case Kind::Power:
      return "((" + n.a.to_string(names) + ")^" + std::to_string(n.exponent) +
             ")";
    case Kind::Negation:
      return "(-" + n.a.to_string(names) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars,
         const ParameterMap& params)
      : src_(src), vars_(vars), params_(params) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail_syntax("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_syntax(const std::string& what) const {
    throw ParseError(ParseError::Kind::Syntax, pos_,
                     "syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (accept('+'))
        e = e + parse_product();
      else if (accept('-'))
        e = e - parse_product();
      else
        return e;
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = e * parse_unary();
      else if (accept('/'))
        e = e / parse_unary();
      else
        return e;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_exponent());
    return base;
  }

  // Signed integer literal, optionally parenthesised; a^b^c is a^(b^c).
  int parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    const bool paren = accept('(');
    int sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    skip_ws();
    const std::size_t lit = pos_;
    if (pos_ >= src_.size() ||
        !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
                                 src_[pos_] == '_' || src_[pos_] == '('))
        throw ParseError(ParseError::Kind::NonIntegerExponent, start,
                         "non-integer exponent at offset " + std::to_string(start) +
                             ": exponents must be integer literals");
      fail_syntax("expected integer exponent");
    }
    const double v = number();
    if (v != std::floor(v) || std::fabs(v) > 1024)
      throw ParseError(ParseError::Kind::NonIntegerExponent, lit,
                       "non-integer exponent at offset " + std::to_string(lit) +
                           ": " + std::string(src_.substr(lit, pos_ - lit)));
    if (paren && !accept(')')) fail_syntax("expected ')'");
    int k = sign * static_cast<int>(v);
    if (accept('^')) {
      const int outer = parse_exponent();
      if (outer < 0 || outer > 16 || std::fabs(std::pow(double(k), outer)) > 1024)
        throw ParseError(ParseError::Kind::NonIntegerExponent, start,
                         "non-integer exponent at offset " + std::to_string(start) +
                             ": chained exponent is not a small integer");
      k = static_cast<int>(ipow_exact(k, outer));
    }
    return k;
  }

  double number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail_syntax("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail_syntax("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) fail_syntax("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_'))
        ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Expr::variable(i);
      if (auto it = params_.find(name); it != params_.end())
        return Expr::constant(it->second);
      throw ParseError(ParseError::Kind::UnknownIdentifier, start,
                       "unknown identifier '" + std::string(name) + "' at offset " +
                           std::to_string(start));
    }
    fail_syntax("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, std::span<const std::string> variables,
           const ParameterMap& parameters) {
  return Parser(source, variables, parameters).run();
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(Expr expr, std::size_t dimension)
    : expr_(std::move(expr)), dimension_(dimension) {
  if (expr_.arity() > dimension_)
    throw std::invalid_argument("expression reads state entry " +
                                std::to_string(expr_.arity() - 1) +
                                " but the field dimension is " +
                                std::to_string(dimension_));
  gradient_.reserve(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i)
    gradient_.push_back(expr_.differentiate(i));
  hessian_.resize(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) {
    hessian_[i].reserve(dimension_);
    for (std::size_t j = 0; j < dimension_; ++j)
      hessian_[i].push_back(gradient_[i].differentiate(j));
  }
}

ScalarField ScalarField::parse(std::string_view source,
                               std::span<const std::string> variables,
                               const ParameterMap& parameters) {
  return ScalarField(hpdiss::parse(source, variables, parameters), variables.size());
}

std::vector<double> ScalarField::gradient_at(std::span<const double> x) const {
  std::vector<double> g(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) g[i] = gradient_[i].eval(x);
  return g;
}

std::vector<double> ScalarField::hessian_at(std::span<const double> x) const {
  std::vector<double> h(dimension_ * dimension_);
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t j = 0; j < dimension_; ++j) h[i * dimension_ + j] = hessian_[i][j].eval(x);
  return h;
}

}  // namespace hpdiss
