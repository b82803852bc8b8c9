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

#ifndef HPDISS_DISSIPATION_HPP
#define HPDISS_DISSIPATION_HPP

#include <memory>

#include "hpdiss/system.hpp"

namespace hpdiss {

// G = grad H (x) grad H - ||grad H||^2 Id. Symmetric and negative
// semidefinite; its kernel contains grad H.
Matrix dissipation_matrix(const Vector& grad_h);

struct Lemma1Check {
  double gh_residual = 0.0;  // ||G grad H||
  double quad_form = 0.0;    // grad C . G grad C
  // ||grad C||^2 ||grad H||^2 - (grad C . grad H)^2, the Cauchy-Schwarz defect
  double dependence_defect = 0.0;
  bool dependent = false;
};

// Relative tolerance on the Cauchy-Schwarz defect below which grad H and
// grad C are declared linearly dependent.
inline constexpr double kDependenceTolerance = 1e-10;

enum class Dissipation { On, Off };

// x' = Pi(x) grad H(x) + G(x) grad C(x) for a chosen Casimir C. With
// Dissipation::Off the G-term is dropped and the free Hamilton-Poisson flow
// remains.
class DissipatedField {
 public:
  DissipatedField(std::shared_ptr<const PoissonSystem> system, ScalarField casimir,
                  Dissipation mode = Dissipation::On);

  std::size_t dimension() const { return system_->dimension(); }
  const PoissonSystem& system() const { return *system_; }
  std::shared_ptr<const PoissonSystem> system_ptr() const { return system_; }
  const ScalarField& casimir() const { return casimir_; }
  Dissipation mode() const { return mode_; }

  Vector grad_h(const Vector& x) const { return system_->grad_h(x); }
  Vector grad_c(const Vector& x) const;
  double hamiltonian(const Vector& x) const { return system_->hamiltonian().value(as_span(x)); }
  double casimir_value(const Vector& x) const { return casimir_.value(as_span(x)); }

  Vector operator()(const Vector& x) const;

  // G(x) grad C(x), i.e. the torque/perturbation term alone.
  Vector perturbation(const Vector& x) const;

 private:
  std::shared_ptr<const PoissonSystem> system_;
  ScalarField casimir_;
  Dissipation mode_;
};

Lemma1Check lemma1_check(const DissipatedField& df, const Vector& x);

// dC/dt along the dissipated flow, grad C . G grad C (never positive).
double casimir_rate(const DissipatedField& df, const Vector& x);

}  // namespace hpdiss

#endif  // HPDISS_DISSIPATION_HPP
