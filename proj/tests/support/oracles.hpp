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

// Test-only oracles, independent of the symbolic differentiation path.

#ifndef HPDISS_TESTS_SUPPORT_ORACLES_HPP
#define HPDISS_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "hpdiss/expr.hpp"

namespace hpdiss::testing {

using ScalarFn = std::function<double(const std::vector<double>&)>;

inline double fd_step(double xi) { return 1e-5 * (1.0 + std::fabs(xi)); }

// Central difference of f along coordinate i.
inline double central_difference(const ScalarFn& f, std::vector<double> x, std::size_t i) {
  const double h = fd_step(x[i]);
  const double xi = x[i];
  x[i] = xi + h;
  const double up = f(x);
  x[i] = xi - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

struct CheckedDifference {
  double value;
  // False when the difference quotient cannot resolve tol: either step
  // halving disagrees beyond tol/10 or is not converging at second order,
  // or rounding in f alone (eps*|f|/h) is that large.
  bool reliable;
};

inline CheckedDifference checked_central_difference(const ScalarFn& f, const std::vector<double>& x,
                                                    std::size_t i, double rel_tol) {
  const double h = fd_step(x[i]);
  auto quotient = [&](double step, double* fmag) {
    std::vector<double> a = x, b = x;
    a[i] += step;
    b[i] -= step;
    const double fa = f(a), fb = f(b);
    if (fmag) *fmag = std::max(std::fabs(fa), std::fabs(fb));
    return (fa - fb) / (2.0 * step);
  };
  double fmag = 0.0;
  const double d1 = quotient(h, &fmag);
  const double d2 = quotient(h / 2, nullptr);
  const double d4 = quotient(h / 4, nullptr);
  fmag = std::max(fmag, std::fabs(f(x)));
  const double tol = rel_tol * (1.0 + std::fabs(d1));
  const double e1 = std::fabs(d1 - d2);
  const double e2 = std::fabs(d2 - d4);
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * fmag / h;
  const bool unstable = e1 > 1e-3 * tol && std::fabs(e1 / e2 - 4.0) > 1.0;
  const bool ok = std::isfinite(d1) && rounding <= 0.1 * tol && (4.0 / 3.0) * e1 <= 0.1 * tol && !unstable;
  return {d1, ok};
}

// Forward-mode dual number evaluation in long double: exact derivative of
// the same tree without going through Expr::differentiate.
struct Dual {
  long double v;
  long double d;
};

inline Dual dual_eval(const Expr& e, const std::vector<double>& x, std::size_t var) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return {e.value(), 0.0L};
    case Expr::Kind::Variable:
      return {x[e.var_index()], e.var_index() == var ? 1.0L : 0.0L};
    case Expr::Kind::Negation: {
      const Dual a = dual_eval(e.lhs(), x, var);
      return {-a.v, -a.d};
    }
    case Expr::Kind::Power: {
      const Dual a = dual_eval(e.lhs(), x, var);
      const int k = e.exponent();
      return {std::pow(a.v, static_cast<long double>(k)),
              k * std::pow(a.v, static_cast<long double>(k - 1)) * a.d};
    }
    default:
      break;
  }
  const Dual a = dual_eval(e.lhs(), x, var);
  const Dual b = dual_eval(e.rhs(), x, var);
  switch (e.kind()) {
    case Expr::Kind::Sum:
      return {a.v + b.v, a.d + b.d};
    case Expr::Kind::Product:
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    default:
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
  }
}

inline std::vector<double> fd_gradient(const ScalarFn& f, const std::vector<double>& x) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = central_difference(f, x, i);
  return g;
}

// Row-major Hessian by second-order central differences of f.
inline std::vector<double> fd_hessian(const ScalarFn& f, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> h(n * n);
  const double s = 1e-4;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto at = [&](double di, double dj) {
        std::vector<double> p = x;
        p[i] += di;
        p[j] += dj;
        return f(p);
      };
      h[i * n + j] = (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s);
    }
  return h;
}

// Smallest |denominator| met while evaluating e at x: quotient denominators
// and bases of negative powers. +inf if there are none.
inline double min_denominator(const Expr& e, const std::vector<double>& x) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable:
      return INFINITY;
    case Expr::Kind::Negation:
      return min_denominator(e.lhs(), x);
    case Expr::Kind::Power: {
      const double inner = min_denominator(e.lhs(), x);
      return e.exponent() < 0 ? std::min(inner, std::fabs(e.lhs().eval(x))) : inner;
    }
    case Expr::Kind::Quotient:
      return std::min({min_denominator(e.lhs(), x), min_denominator(e.rhs(), x),
                       std::fabs(e.rhs().eval(x))});
    default:
      return std::min(min_denominator(e.lhs(), x), min_denominator(e.rhs(), x));
  }
}

// Random expression trees over n variables, built from the public operators.
class ExprGenerator {
 public:
  ExprGenerator(std::size_t n, std::uint64_t seed) : n_(n), rng_(seed) {}

  Expr operator()(int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    switch (pick(rng_)) {
      case 0:
        return Expr::constant(std::uniform_real_distribution<double>(-2.0, 2.0)(rng_));
      case 1:
        return Expr::variable(std::uniform_int_distribution<std::size_t>(0, n_ - 1)(rng_));
      case 2:
        return (*this)(depth - 1) + (*this)(depth - 1);
      case 3:
        return (*this)(depth - 1) * (*this)(depth - 1);
      case 4:
        return (*this)(depth - 1) / (*this)(depth - 1);
      case 5:
        return pow((*this)(depth - 1), std::uniform_int_distribution<int>(-2, 3)(rng_));
      case 6:
        return -(*this)(depth - 1);
      default:
        return (*this)(depth - 1) - (*this)(depth - 1);
    }
  }

  std::vector<double> point(double box = 2.0) {
    std::uniform_real_distribution<double> u(-box, box);
    std::vector<double> p(n_);
    for (auto& v : p) v = u(rng_);
    return p;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::size_t n_;
  std::mt19937_64 rng_;
};

}  // namespace hpdiss::testing

#endif  // HPDISS_TESTS_SUPPORT_ORACLES_HPP
