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

#ifndef HPDISS_RIGID_BODY_HPP
#define HPDISS_RIGID_BODY_HPP

#include <memory>
#include <string>
#include <vector>

#include "hpdiss/analysis.hpp"

namespace hpdiss::rigid_body {

// Principal moments of inertia, strictly ordered I1 > I2 > I3 > 0.
struct InertiaTriple {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;

  void validate() const;  // throws std::invalid_argument
  ParameterMap parameters() const { return {{"I1", i1}, {"I2", i2}, {"I3", i3}}; }
};

// Euler equations in body angular momentum x_i = I_i w_i: minus-Lie-Poisson
// tensor on so(3)*, H = (x1^2/I1 + x2^2/I2 + x3^2/I3)/2, with the standard
// Casimir C0 = |x|^2/2 registered.
PoissonSystem make_system(const InertiaTriple& inertia);

ScalarField standard_casimir();  // C0

enum class CaseId { I = 1, II = 2, III = 3 };

const char* to_string(CaseId id);

// Dissipated rigid body: Case I uses C0, Case II uses C2 = -C0 and Case III
// uses C3 = (C0 - M0^2/2)^2 - C0/I1, with M0 baked into C3.
struct RigidBodyCase {
  CaseId id = CaseId::I;
  InertiaTriple inertia;
  double m0 = 0.0;
  std::shared_ptr<const PoissonSystem> system;
  ScalarField casimir;
  DissipatedField field;
};

RigidBodyCase make_case(const InertiaTriple& inertia, CaseId id, double m0 = 0.0,
                        Dissipation mode = Dissipation::On);

// Closed-form Case I torque u0 = G grad C0.
Vector torque_case1(const InertiaTriple& inertia, const Vector& x);

struct AxisFamily {
  int axis = 0;  // 0, 1, 2 for x1, x2, x3
  bool stable = false;
  std::string note;
};

// The three coordinate axes {(M,0,0)}, {(0,M,0)}, {(0,0,M)}; long and short
// axes stable, middle axis not stable for M != 0.
std::vector<AxisFamily> analytic_equilibria(const InertiaTriple& inertia);

// True if x lies on one of the axis families to within tol.
bool on_axis_family(const Vector& x, double tol);

// Limit point predicted on the level set of H through x0: the short axis
// (0, 0, s sqrt(2 I3 H(x0))) for Case I, the long axis
// (s sqrt(2 I1 H(x0)), 0, 0) for Case II. Case III throws std::domain_error.
Vector predicted_limit(const RigidBodyCase& c, const Vector& x0, int branch_sign);

// Resolver over the attracting axis of a case. `both_branches` lists the two
// signed points, which makes the prediction non-unique.
CandidateResolver axis_resolver(const RigidBodyCase& c, int branch_sign, bool both_branches = false);

// psi for Case I: (C - M0^2/2)^2 + C - I3 H, certifying (0, 0, M0).
ScalarField case1_psi(const InertiaTriple& inertia, double m0);
// psi for Case II: H + (C + M0^2/2)^2 + C/I1, certifying (M0, 0, 0).
ScalarField case2_psi(const InertiaTriple& inertia, double m0);
// psi for Case III: H + C with C = C3, certifying (M0, 0, 0).
ScalarField case3_psi();

// diag(1 - I3/I1, 1 - I3/I2, 2 M0^2)
Matrix case1_hessian(const InertiaTriple& inertia, double m0);
// diag(2 M0^2, 1/I2 - 1/I1, 1/I3 - 1/I1)
Matrix case3_hessian(const InertiaTriple& inertia, double m0);

struct Case3Lyapunov {
  RigidBodyCase rigid_case;
  ScalarField psi;
  Vector equilibrium;
  Matrix analytic_hessian;
  LyapunovCertificate certificate;
};

Case3Lyapunov case3_lyapunov(double m0, const InertiaTriple& inertia);

}  // namespace hpdiss::rigid_body

#endif  // HPDISS_RIGID_BODY_HPP
