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

#include "hpdiss/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hpdiss {

PoissonSystem::PoissonSystem(std::vector<std::string> variables,
                             std::vector<std::vector<Expr>> pi, ScalarField hamiltonian,
                             std::vector<ScalarField> casimirs)
    : variables_(std::move(variables)),
      pi_(std::move(pi)),
      hamiltonian_(std::move(hamiltonian)),
      casimirs_(std::move(casimirs)) {
  const std::size_t n = variables_.size();
  if (n == 0) throw std::invalid_argument("system dimension must be positive");
  if (pi_.size() != n)
    throw std::invalid_argument("Poisson tensor has " + std::to_string(pi_.size()) +
                                " rows, expected " + std::to_string(n));
  for (const auto& row : pi_) {
    if (row.size() != n)
      throw std::invalid_argument("Poisson tensor row has " + std::to_string(row.size()) +
                                  " entries, expected " + std::to_string(n));
    for (const auto& e : row)
      if (e.arity() > n) throw std::invalid_argument("Poisson tensor entry reads past state");
  }
  if (hamiltonian_.dimension() != n)
    throw std::invalid_argument("Hamiltonian dimension does not match system");
  for (const auto& c : casimirs_)
    if (c.dimension() != n) throw std::invalid_argument("Casimir dimension does not match system");
}

PoissonSystem PoissonSystem::with_casimirs(std::vector<ScalarField> casimirs) const {
  return PoissonSystem(variables_, pi_, hamiltonian_, std::move(casimirs));
}

Matrix PoissonSystem::pi(const Vector& x) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Matrix m(n, n);
  const auto p = as_span(x);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = pi_[i][j].eval(p);
  return m;
}

Vector PoissonSystem::grad_h(const Vector& x) const {
  return to_vector(hamiltonian_.gradient_at(as_span(x)));
}

Vector PoissonSystem::hamiltonian_field(const Vector& x) const { return pi(x) * grad_h(x); }

double poisson_bracket(const PoissonSystem& sys, const ScalarField& f, const ScalarField& g,
                       const Vector& x) {
  const std::size_t n = sys.dimension();
  if (f.dimension() != n || g.dimension() != n || static_cast<std::size_t>(x.size()) != n)
    throw std::invalid_argument("Poisson bracket: dimension mismatch with system of dimension " +
                                std::to_string(n));
  const Vector gf = to_vector(f.gradient_at(as_span(x)));
  const Vector gg = to_vector(g.gradient_at(as_span(x)));
  return gf.dot(sys.pi(x) * gg);
}

StructureReport verify_structure(const PoissonSystem& sys, std::span<const Vector> samples) {
  StructureReport r;
  r.samples = samples.size();
  for (const Vector& x : samples) {
    const Matrix p = sys.pi(x);
    const double anti = (p + p.transpose()).cwiseAbs().maxCoeff();
    r.max_antisymmetry = std::isfinite(anti) ? std::max(r.max_antisymmetry, anti) : INFINITY;
    for (const auto& c : sys.casimirs()) {
      const Vector gc = to_vector(c.gradient_at(as_span(x)));
      const double res = (p * gc).norm() / (1.0 + gc.norm());
      r.max_casimir_residual =
          std::isfinite(res) ? std::max(r.max_casimir_residual, res) : INFINITY;
    }
  }
  r.passed = !samples.empty() && r.max_antisymmetry <= r.tolerance &&
             r.max_casimir_residual <= r.tolerance;
  return r;
}

}  // namespace hpdiss
