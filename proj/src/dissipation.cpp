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

#include "hpdiss/dissipation.hpp"

#include <stdexcept>

namespace hpdiss {

Matrix dissipation_matrix(const Vector& grad_h) {
  const auto n = grad_h.size();
  return grad_h * grad_h.transpose() - grad_h.squaredNorm() * Matrix::Identity(n, n);
}

DissipatedField::DissipatedField(std::shared_ptr<const PoissonSystem> system,
                                 ScalarField casimir, Dissipation mode)
    : system_(std::move(system)), casimir_(std::move(casimir)), mode_(mode) {
  if (!system_) throw std::invalid_argument("dissipated field needs a system");
  if (casimir_.dimension() != system_->dimension())
    throw std::invalid_argument("Casimir dimension does not match system");
}

Vector DissipatedField::grad_c(const Vector& x) const {
  return to_vector(casimir_.gradient_at(as_span(x)));
}

Vector DissipatedField::perturbation(const Vector& x) const {
  const Vector gh = grad_h(x);
  const Vector gc = grad_c(x);
  // (gh gh^T - |gh|^2 I) gc without forming G
  return gh.dot(gc) * gh - gh.squaredNorm() * gc;
}

Vector DissipatedField::operator()(const Vector& x) const {
  const Vector gh = grad_h(x);
  Vector f = system_->pi(x) * gh;
  if (mode_ == Dissipation::On) {
    const Vector gc = grad_c(x);
    f += gh.dot(gc) * gh - gh.squaredNorm() * gc;
  }
  return f;
}

Lemma1Check lemma1_check(const DissipatedField& df, const Vector& x) {
  const Vector gh = df.grad_h(x);
  const Vector gc = df.grad_c(x);
  const Matrix g = dissipation_matrix(gh);
  Lemma1Check r;
  r.gh_residual = (g * gh).norm();
  r.quad_form = gc.dot(g * gc);
  const double cross = gc.squaredNorm() * gh.squaredNorm();
  const double dot = gc.dot(gh);
  r.dependence_defect = cross - dot * dot;
  r.dependent = r.dependence_defect <= kDependenceTolerance * (1.0 + cross);
  return r;
}

double casimir_rate(const DissipatedField& df, const Vector& x) {
  const Vector gc = df.grad_c(x);
  return gc.dot(df.perturbation(x));
}

}  // namespace hpdiss
