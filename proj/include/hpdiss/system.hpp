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

#ifndef HPDISS_SYSTEM_HPP
#define HPDISS_SYSTEM_HPP

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "hpdiss/expr.hpp"

namespace hpdiss {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Matrix to_matrix(const std::vector<double>& row_major, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row_major[static_cast<std::size_t>(i * n + j)];
  return m;
}

// A Hamilton-Poisson system x' = Pi(x) grad H(x) on R^n together with the
// Casimir functions registered for it.
class PoissonSystem {
 public:
  PoissonSystem(std::vector<std::string> variables, std::vector<std::vector<Expr>> pi,
                ScalarField hamiltonian, std::vector<ScalarField> casimirs = {});

  std::size_t dimension() const { return variables_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<std::vector<Expr>>& pi_entries() const { return pi_; }
  const ScalarField& hamiltonian() const { return hamiltonian_; }
  const std::vector<ScalarField>& casimirs() const { return casimirs_; }

  PoissonSystem with_casimirs(std::vector<ScalarField> casimirs) const;

  Matrix pi(const Vector& x) const;
  Vector grad_h(const Vector& x) const;

  // Pi(x) grad H(x), the unperturbed vector field.
  Vector hamiltonian_field(const Vector& x) const;

 private:
  std::vector<std::string> variables_;
  std::vector<std::vector<Expr>> pi_;
  ScalarField hamiltonian_;
  std::vector<ScalarField> casimirs_;
};

// {f, g}(x) = grad f(x) . Pi(x) grad g(x)
double poisson_bracket(const PoissonSystem& sys, const ScalarField& f,
                       const ScalarField& g, const Vector& x);

struct StructureReport {
  std::size_t samples = 0;
  double max_antisymmetry = 0.0;  // max |Pi_ij + Pi_ji|
  // max ||Pi grad C|| / (1 + ||grad C||) over samples and registered Casimirs
  double max_casimir_residual = 0.0;
  double tolerance = 1e-10;
  bool passed = false;
};

StructureReport verify_structure(const PoissonSystem& sys, std::span<const Vector> samples);

}  // namespace hpdiss

#endif  // HPDISS_SYSTEM_HPP
