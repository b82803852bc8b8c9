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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"

namespace hpdiss::rigid_body {
namespace {

const InertiaTriple kI{4.0, 1.5, 1.0};
const std::vector<std::string> kXyz{"x1", "x2", "x3"};
const std::vector<std::string> kHc{"H", "C"};

Vector vec3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

std::vector<Vector> cube_samples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(vec3(u(rng), u(rng), u(rng)));
  return out;
}

TEST(InertiaTest, OrderingEnforced) {
  EXPECT_NO_THROW(kI.validate());
  try {
    InertiaTriple{1.0, 1.5, 4.0}.validate();
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("I1>I2>I3 violated"), std::string::npos);
  }
  EXPECT_THROW((InertiaTriple{2.0, 2.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((InertiaTriple{2.0, 1.0, -1.0}.validate()), std::invalid_argument);
  EXPECT_THROW(make_system(InertiaTriple{1.0, 1.5, 4.0}), std::invalid_argument);
}

TEST(MakeSystemTest, ReferenceStateEnergy) {
  const PoissonSystem sys = make_system(kI);
  EXPECT_NEAR(sys.hamiltonian().value(as_span(vec3(-0.1, 0.2, 0.175))), 0.029895833333333333,
              1e-15);
  ASSERT_EQ(sys.casimirs().size(), 1u);
  EXPECT_DOUBLE_EQ(sys.casimirs()[0].value(as_span(vec3(3.0, 0.0, 4.0))), 12.5);
}

TEST(MakeSystemTest, TensorRow) {
  const Matrix pi = make_system(kI).pi(vec3(0.0, 0.0, 1.0));
  EXPECT_EQ(pi.row(0), vec3(0.0, -1.0, 0.0).transpose());
}

TEST(MakeCaseTest, CaseThreeNeedsReference) {
  EXPECT_THROW(make_case(kI, CaseId::III, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(make_case(kI, CaseId::III, 0.5));
  EXPECT_STREQ(to_string(CaseId::II), "rigid_body.case2");
}

TEST(TorqueTest, VanishesOnShortAxis) {
  EXPECT_EQ(torque_case1(kI, vec3(0.0, 0.0, 0.7)), Vector::Zero(3));
  EXPECT_LE(make_case(kI, CaseId::I).field.perturbation(vec3(0.0, 0.0, 0.7)).norm(), 1e-16);
}

TEST(TorqueTest, FirstComponentAtUnitPoint) {
  // x1 [(1/I1 - 1/I2) x2^2/I2 + (1/I1 - 1/I3) x3^2/I3]
  const double expected = (0.25 - 1.0 / 1.5) * (1.0 / 1.5) + (0.25 - 1.0) * 1.0;
  const Vector u = torque_case1(kI, vec3(1.0, 1.0, 1.0));
  EXPECT_NEAR(u[0], expected, 1e-15);
  EXPECT_NEAR(u[0], -1.0277777777777777, 1e-15);
}

TEST(TorqueTest, ClosedFormMatchesDissipationTerm) {
  const DissipatedField df = make_case(kI, CaseId::I).field;
  for (const Vector& x : cube_samples(1000, 31)) {
    const Vector u = torque_case1(kI, x);
    const Vector g = df.perturbation(x);
    const double scale = 1.0 + df.grad_h(x).squaredNorm() * x.norm();
    EXPECT_LE((u - g).cwiseAbs().maxCoeff(), 1e-12 * scale);
    EXPECT_LE((df(x) - df.system().hamiltonian_field(x) - u).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
}

TEST(TorqueTest, CaseTwoReversesCaseOne) {
  const DissipatedField one = make_case(kI, CaseId::I).field;
  const DissipatedField two = make_case(kI, CaseId::II).field;
  for (const Vector& x : cube_samples(200, 32))
    EXPECT_LE((two.perturbation(x) + one.perturbation(x)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EquilibriaTest, AxisFamilies) {
  const auto fams = analytic_equilibria(kI);
  ASSERT_EQ(fams.size(), 3u);
  EXPECT_TRUE(fams[0].stable);
  EXPECT_FALSE(fams[1].stable);
  EXPECT_TRUE(fams[2].stable);
  EXPECT_TRUE(on_axis_family(Vector::Zero(3), 0.0));
  EXPECT_FALSE(on_axis_family(vec3(0.1, 0.1, 0.0), 1e-12));
  EXPECT_TRUE(on_axis_family(vec3(0.0, -0.4, 0.0), 0.0));
}

TEST(EquilibriaTest, ClassificationAgreesWithAxes) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> axis(0, 2);
  for (CaseId id : {CaseId::I, CaseId::II}) {
    const DissipatedField df = make_case(kI, id).field;
    for (int k = 0; k < 100; ++k) {
      Vector on = Vector::Zero(3);
      on[axis(rng)] = u(rng);
      EXPECT_TRUE(classify_point(df, on).in_e_xi) << on.transpose();
      const Vector off = vec3(u(rng), u(rng), u(rng));
      ASSERT_FALSE(on_axis_family(off, 1e-3));
      EXPECT_FALSE(classify_point(df, off).in_e_xi) << off.transpose();
    }
  }
}

TEST(PredictedLimitTest, ReferenceStateValues) {
  const Vector x0 = vec3(-0.1, 0.2, 0.175);
  const double h0 = 0.029895833333333333;
  const Vector one = predicted_limit(make_case(kI, CaseId::I), x0, +1);
  EXPECT_NEAR(one[2], 0.24452334585202015, 1e-15);
  EXPECT_NEAR(one[2] * one[2], 2.0 * kI.i3 * h0, 1e-14 * 2.0 * kI.i3 * h0);
  EXPECT_EQ(one[0], 0.0);
  EXPECT_EQ(one[1], 0.0);
  const Vector lower = predicted_limit(make_case(kI, CaseId::I), x0, -1);
  EXPECT_EQ(lower[2], -one[2]);
  const Vector two = predicted_limit(make_case(kI, CaseId::II), x0, +1);
  EXPECT_NEAR(two[0], 0.4890466917040403, 1e-15);
  EXPECT_THROW(predicted_limit(make_case(kI, CaseId::III, 0.5), x0, +1), std::domain_error);
}

TEST(PredictedLimitTest, FixedPointOnAxis) {
  const Vector x0 = vec3(0.0, 0.0, 0.3);
  const Vector x = predicted_limit(make_case(kI, CaseId::I), x0, +1);
  EXPECT_NEAR((x - x0).norm(), 0.0, 1e-16);
}

TEST(PredictedLimitTest, SquareMatchesEnergy) {
  const RigidBodyCase c = make_case(kI, CaseId::I);
  for (const Vector& x0 : cube_samples(100, 34)) {
    const Vector x = predicted_limit(c, x0, +1);
    const double target = 2.0 * kI.i3 * c.field.hamiltonian(x0);
    EXPECT_LE(std::fabs(x[2] * x[2] - target), 1e-14 * target);
  }
}

TEST(LyapunovTest, CaseOneHessianDisplay) {
  const Matrix h = case1_hessian(kI, 0.244);
  EXPECT_NEAR(h(0, 0), 0.75, 1e-16);
  EXPECT_NEAR(h(1, 1), 1.0 / 3.0, 1e-16);
  EXPECT_NEAR(h(2, 2), 0.119072, 1e-15);
}

TEST(LyapunovTest, CaseThreeCertificate) {
  const Case3Lyapunov l = case3_lyapunov(1.0, kI);
  EXPECT_EQ(l.equilibrium, vec3(1.0, 0.0, 0.0));
  EXPECT_TRUE(l.certificate.valid());
  EXPECT_EQ(l.certificate.definiteness, Definiteness::PositiveDefinite);
  EXPECT_NEAR(l.analytic_hessian(1, 1), 1.0 / 1.5 - 0.25, 1e-16);
  EXPECT_NEAR(l.analytic_hessian(2, 2), 0.75, 1e-16);
  EXPECT_LE((l.certificate.hessian - l.analytic_hessian).cwiseAbs().maxCoeff(), 1e-10);
  // Independent second differences of the composed L fix the x1 entry.
  const ScalarField lf = compose_lyapunov(l.rigid_case.field, l.psi, l.equilibrium);
  const auto fd = testing::fd_hessian([&](const std::vector<double>& p) { return lf.value(p); },
                                      {1.0, 0.0, 0.0});
  EXPECT_NEAR(fd[0], 2.0, 1e-5);
  EXPECT_NEAR(l.analytic_hessian(0, 0), 2.0, 1e-16);
  EXPECT_THROW(case3_lyapunov(0.0, kI), std::invalid_argument);
}

TEST(LyapunovTest, TransformedCasimirPsi) {
  const double m0 = 0.3;
  const ParameterMap p{{"I3", kI.i3}, {"M0", m0}};
  const ScalarField psi = case1_psi(kI, m0);
  const ScalarField psi1 = ScalarField::parse("C - I3*H", kHc, p);
  const ScalarField c1 = ScalarField::parse("C0 + (C0 - M0^2/2)^2", std::vector<std::string>{"C0"}, p);
  const PoissonSystem sys = make_system(kI);
  for (const Vector& x : cube_samples(100, 35)) {
    const double h = sys.hamiltonian().value(as_span(x));
    const double c0 = standard_casimir().value(as_span(x));
    const std::vector<double> c0v{c0};
    const double lhs = psi.value(std::vector<double>{h, c0});
    const double rhs = psi1.value(std::vector<double>{h, c1.value(c0v)});
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(LyapunovTest, CaseThreeTwoForms) {
  const double m0 = 0.4890466;
  const RigidBodyCase c = make_case(kI, CaseId::III, m0);
  const ParameterMap p{{"I1", kI.i1}, {"M0", m0}};
  const ScalarField alt = ScalarField::parse("(-(x1^2+x2^2+x3^2)/2 + M0^2/2)^2 - (x1^2+x2^2+x3^2)/2/I1",
                                             kXyz, p);
  for (const Vector& x : cube_samples(100, 36))
    EXPECT_NEAR(c.casimir.value(as_span(x)), alt.value(as_span(x)), 1e-12);
}

}  // namespace
}  // namespace hpdiss::rigid_body
