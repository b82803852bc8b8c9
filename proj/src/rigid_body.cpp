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

#include "hpdiss/rigid_body.hpp"

#include <cmath>
#include <stdexcept>

namespace hpdiss::rigid_body {

namespace {

const std::vector<std::string>& state_names() {
  static const std::vector<std::string> names{"x1", "x2", "x3"};
  return names;
}

const std::vector<std::string>& psi_names() {
  static const std::vector<std::string> names{"H", "C"};
  return names;
}

constexpr const char* kC0 = "0.5*(x1^2 + x2^2 + x3^2)";

}  // namespace

void InertiaTriple::validate() const {
  if (!(std::isfinite(i1) && std::isfinite(i2) && std::isfinite(i3)))
    throw std::invalid_argument("moments of inertia must be finite");
  if (!(i1 > i2 && i2 > i3 && i3 > 0.0))
    throw std::invalid_argument("I1>I2>I3 violated: got I=(" + std::to_string(i1) + ", " +
                                std::to_string(i2) + ", " + std::to_string(i3) + ")");
}

ScalarField standard_casimir() { return ScalarField::parse(kC0, state_names()); }

PoissonSystem make_system(const InertiaTriple& inertia) {
  inertia.validate();
  const auto& v = state_names();
  auto e = [&](const char* s) { return parse(s, v); };
  std::vector<std::vector<Expr>> pi{{e("0"), e("-x3"), e("x2")},
                                    {e("x3"), e("0"), e("-x1")},
                                    {e("-x2"), e("x1"), e("0")}};
  ScalarField h = ScalarField::parse("0.5*(x1^2/I1 + x2^2/I2 + x3^2/I3)", v, inertia.parameters());
  return PoissonSystem(v, std::move(pi), std::move(h), {standard_casimir()});
}

const char* to_string(CaseId id) {
  switch (id) {
    case CaseId::I:
      return "rigid_body.case1";
    case CaseId::II:
      return "rigid_body.case2";
    case CaseId::III:
      return "rigid_body.case3";
  }
  return "unknown";
}

RigidBodyCase make_case(const InertiaTriple& inertia, CaseId id, double m0, Dissipation mode) {
  auto system = std::make_shared<const PoissonSystem>(make_system(inertia));
  ParameterMap params = inertia.parameters();
  params["M0"] = m0;
  const auto& v = state_names();
  ScalarField casimir;
  switch (id) {
    case CaseId::I:
      casimir = standard_casimir();
      break;
    case CaseId::II:
      casimir = ScalarField::parse("-0.5*(x1^2 + x2^2 + x3^2)", v, params);
      break;
    case CaseId::III:
      if (m0 == 0.0 || !std::isfinite(m0))
        throw std::invalid_argument("Case III needs a nonzero finite M0");
      casimir = ScalarField::parse(
          "(0.5*(x1^2 + x2^2 + x3^2) - M0^2/2)^2 - 0.5*(x1^2 + x2^2 + x3^2)/I1", v, params);
      break;
    default:
      throw std::invalid_argument("unknown rigid-body case");
  }
  DissipatedField field(system, casimir, mode);
  return RigidBodyCase{id, inertia, m0, std::move(system), std::move(casimir), std::move(field)};
}

Vector torque_case1(const InertiaTriple& in, const Vector& x) {
  const double a1 = 1.0 / in.i1, a2 = 1.0 / in.i2, a3 = 1.0 / in.i3;
  const double q1 = x[0] * x[0] * a1, q2 = x[1] * x[1] * a2, q3 = x[2] * x[2] * a3;
  Vector u(3);
  u[0] = x[0] * ((a1 - a2) * q2 + (a1 - a3) * q3);
  u[1] = x[1] * ((a2 - a1) * q1 + (a2 - a3) * q3);
  u[2] = x[2] * ((a3 - a1) * q1 + (a3 - a2) * q2);
  return u;
}

std::vector<AxisFamily> analytic_equilibria(const InertiaTriple& inertia) {
  inertia.validate();
  return {{0, true, "long axis (M0,0,0), stable"},
          {1, false, "middle axis (0,M0,0), not stable for M0 != 0"},
          {2, true, "short axis (0,0,M0), stable"}};
}

bool on_axis_family(const Vector& x, double tol) {
  for (int axis = 0; axis < 3; ++axis) {
    double off = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != axis) off = std::max(off, std::fabs(x[j]));
    if (off <= tol) return true;
  }
  return false;
}

namespace {

int limit_axis(const RigidBodyCase& c, double& inertia_factor) {
  switch (c.id) {
    case CaseId::I:
      inertia_factor = c.inertia.i3;
      return 2;
    case CaseId::II:
      inertia_factor = c.inertia.i1;
      return 0;
    default:
      throw std::domain_error(
          "no closed-form limit for Case III; only attraction to the x1 axis is known");
  }
}

Vector axis_point(int axis, double value) {
  Vector p = Vector::Zero(3);
  p[axis] = value;
  return p;
}

}  // namespace

Vector predicted_limit(const RigidBodyCase& c, const Vector& x0, int branch_sign) {
  if (branch_sign != 1 && branch_sign != -1)
    throw std::invalid_argument("branch sign must be +1 or -1");
  double factor = 0.0;
  const int axis = limit_axis(c, factor);
  const double h = c.field.hamiltonian(x0);
  return axis_point(axis, branch_sign * std::sqrt(2.0 * factor * h));
}

CandidateResolver axis_resolver(const RigidBodyCase& c, int branch_sign, bool both_branches) {
  if (branch_sign != 1 && branch_sign != -1)
    throw std::invalid_argument("branch sign must be +1 or -1");
  double factor = 0.0;
  const int axis = limit_axis(c, factor);
  return [axis, factor, branch_sign, both_branches](double h) {
    std::vector<Vector> out;
    if (h < 0.0) return out;
    const double r = std::sqrt(2.0 * factor * h);
    if (r == 0.0) {
      out.push_back(Vector::Zero(3));
    } else if (both_branches) {
      out.push_back(axis_point(axis, r));
      out.push_back(axis_point(axis, -r));
    } else {
      out.push_back(axis_point(axis, branch_sign * r));
    }
    return out;
  };
}

ScalarField case1_psi(const InertiaTriple& inertia, double m0) {
  ParameterMap p = inertia.parameters();
  p["M0"] = m0;
  return ScalarField::parse("(C - M0^2/2)^2 + C - I3*H", psi_names(), p);
}

ScalarField case2_psi(const InertiaTriple& inertia, double m0) {
  ParameterMap p = inertia.parameters();
  p["M0"] = m0;
  return ScalarField::parse("H + (C + M0^2/2)^2 + C/I1", psi_names(), p);
}

ScalarField case3_psi() { return ScalarField::parse("H + C", psi_names()); }

Matrix case1_hessian(const InertiaTriple& in, double m0) {
  return (Vector(3) << 1.0 - in.i3 / in.i1, 1.0 - in.i3 / in.i2, 2.0 * m0 * m0)
      .finished()
      .asDiagonal();
}

Matrix case3_hessian(const InertiaTriple& in, double m0) {
  return (Vector(3) << 2.0 * m0 * m0, 1.0 / in.i2 - 1.0 / in.i1, 1.0 / in.i3 - 1.0 / in.i1)
      .finished()
      .asDiagonal();
}

Case3Lyapunov case3_lyapunov(double m0, const InertiaTriple& inertia) {
  RigidBodyCase rc = make_case(inertia, CaseId::III, m0);
  ScalarField psi = case3_psi();
  Vector xe = axis_point(0, m0);
  LyapunovCertificate cert = build_certificate(rc.field, psi, xe);
  Matrix analytic = case3_hessian(inertia, m0);
  return Case3Lyapunov{std::move(rc), std::move(psi), std::move(xe), std::move(analytic),
                       std::move(cert)};
}

}  // namespace hpdiss::rigid_body
