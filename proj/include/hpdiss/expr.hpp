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

#ifndef HPDISS_EXPR_HPP
#define HPDISS_EXPR_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpdiss {

// Raised by parse(). offset() is the zero-based character offset of the
// offending token in the source text.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, NonIntegerExponent };

  ParseError(Kind kind, std::size_t offset, const std::string& message)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

// Immutable scalar expression over an indexed state vector. Copies share the
// underlying tree, so an Expr is cheap to pass by value and safe to evaluate
// concurrently.
class Expr {
 public:
  enum class Kind { Constant, Variable, Sum, Product, Quotient, Power, Negation };

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable(std::size_t index);

  Kind kind() const;
  double value() const;           // Constant only
  std::size_t var_index() const;  // Variable only
  int exponent() const;           // Power only
  const Expr& lhs() const;        // Sum, Product, Quotient; base for Power; operand for Negation
  const Expr& rhs() const;        // Sum, Product, Quotient

  bool is_constant(double v) const;

  // Number of state entries this expression reads: 1 + the largest variable
  // index, or 0 for a closed expression.
  std::size_t arity() const;

  double eval(std::span<const double> x) const;

  // Exact partial derivative with respect to state entry `var`.
  Expr differentiate(std::size_t var) const;

  // Replaces each variable i with replacements[i].
  Expr substitute(std::span<const Expr> replacements) const;

  // Fully parenthesised text that parse() reads back to an equivalent tree.
  std::string to_string(std::span<const std::string> names) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, int exponent);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

using ParameterMap = std::map<std::string, double, std::less<>>;

// Grammar, loosest to tightest: + -, then * /, then unary minus, then ^.
// Exponents are (optionally signed, optionally parenthesised) integer
// literals. Identifiers resolve to `variables` first, then `parameters`,
// which are folded in as constants.
Expr parse(std::string_view source, std::span<const std::string> variables,
           const ParameterMap& parameters = {});

// An expression together with its symbolic gradient and Hessian, built once.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Expr expr, std::size_t dimension);

  static ScalarField parse(std::string_view source,
                           std::span<const std::string> variables,
                           const ParameterMap& parameters = {});

  std::size_t dimension() const { return dimension_; }
  const Expr& expr() const { return expr_; }
  const std::vector<Expr>& gradient() const { return gradient_; }
  const std::vector<std::vector<Expr>>& hessian() const { return hessian_; }

  double value(std::span<const double> x) const { return expr_.eval(x); }
  std::vector<double> gradient_at(std::span<const double> x) const;
  std::vector<double> hessian_at(std::span<const double> x) const;  // row-major

 private:
  Expr expr_;
  std::size_t dimension_ = 0;
  std::vector<Expr> gradient_;
  std::vector<std::vector<Expr>> hessian_;
};

}  // namespace hpdiss

#endif  // HPDISS_EXPR_HPP
