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

#ifndef HPDISS_ANALYSIS_HPP
#define HPDISS_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpdiss/dissipation.hpp"

namespace hpdiss {

// Membership of a point in E_xi (zeros of the dissipated field), E_xi_Pi
// (zeros of Pi grad H) and C_* (critical points of the Casimir).
struct EquilibriumReport {
  Vector point;
  double field_residual = 0.0;  // ||Pi grad H + G grad C||
  double pi_residual = 0.0;     // ||Pi grad H||
  double grad_c_norm = 0.0;
  double dependence_defect = 0.0;
  // residual scales: 1 + ||Pi|| ||grad H|| (+ ||grad H||^2 ||grad C|| for the field)
  double field_scale = 1.0;
  double pi_scale = 1.0;
  double tolerance = 0.0;
  bool dependent = false;
  bool in_e_xi = false;
  bool in_e_pi = false;
  bool in_c_star = false;
};

inline constexpr double kEquilibriumTolerance = 1e-9;

EquilibriumReport classify_point(const DissipatedField& df, const Vector& x,
                                 double tol = kEquilibriumTolerance);

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };
enum class Verdict { Valid, Invalid, Inconclusive };

const char* to_string(Definiteness d);
const char* to_string(Verdict v);

// Second-order check that x_e is a strict local minimum of
// L(x) = psi(H(x), C(x)) - psi(H(x_e), C(x_e)) with d psi / dC > 0 there.
struct LyapunovCertificate {
  Vector equilibrium;
  double h_value = 0.0;
  double c_value = 0.0;
  double dpsi_dh = 0.0;
  double dpsi_dc = 0.0;
  Vector gradient;               // grad L(x_e)
  double gradient_residual = 0.0;
  Matrix hessian;                // Hess L(x_e), second-order chain rule through psi
  double composed_hessian_discrepancy = 0.0;  // vs Hessian of the substituted expression
  double min_eigenvalue = 0.0;
  Definiteness definiteness = Definiteness::Indefinite;
  Verdict verdict = Verdict::Invalid;
  std::vector<std::string> reasons;  // why the verdict is not Valid

  bool valid() const { return verdict == Verdict::Valid; }
};

inline constexpr double kGradientTolerance = 1e-10;

// psi is a field over (H, C). Throws std::invalid_argument if x_e is not an
// equilibrium of the dissipated field.
LyapunovCertificate build_certificate(const DissipatedField& df, const ScalarField& psi,
                                      const Vector& x_e);

// L(x) = psi(H(x), C(x)) - psi(H(x_e), C(x_e)) as a symbolic field over the state.
ScalarField compose_lyapunov(const DissipatedField& df, const ScalarField& psi, const Vector& x_e);

// Classifies a symmetric matrix by attempted LDL^T factorisation with pivot
// threshold 1e-12 trace; the smallest eigenvalue is reported alongside.
Definiteness classify_definiteness(const Matrix& m, double* min_eigenvalue = nullptr);

// Given h = H(x0), lists the candidate points of E_xi u C_* on the level set
// near the equilibrium of interest.
using CandidateResolver = std::function<std::vector<Vector>(double h)>;

// The unique candidate, or nullopt when the resolver yields zero or several.
std::optional<Vector> predict_limit(const DissipatedField& df, const Vector& x0,
                                    const CandidateResolver& resolver);

}  // namespace hpdiss

#endif  // HPDISS_ANALYSIS_HPP
