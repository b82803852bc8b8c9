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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hpdiss/rigid_body.hpp"

namespace hpdiss {
namespace {

const std::vector<std::string> kXyz{"x1", "x2", "x3"};
const rigid_body::InertiaTriple kCaseOne{4.0, 1.5, 1.0};

Vector vec3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

std::vector<Vector> cube_samples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vector> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(vec3(u(rng), u(rng), u(rng)));
  return out;
}

ScalarField field(const char* text) { return ScalarField::parse(text, kXyz); }

TEST(PoissonSystemTest, MinusLiePoissonTensor) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const Matrix pi = sys.pi(vec3(0.0, 0.0, 1.0));
  EXPECT_EQ(pi(0, 0), 0.0);
  EXPECT_EQ(pi(0, 1), -1.0);
  EXPECT_EQ(pi(0, 2), 0.0);
  const Matrix p = sys.pi(vec3(0.3, -0.2, 0.5));
  EXPECT_LE((p + p.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PoissonSystemTest, RejectsRaggedTensor) {
  std::vector<std::vector<Expr>> pi(3, std::vector<Expr>(2, Expr::constant(0.0)));
  EXPECT_THROW(PoissonSystem(kXyz, pi, field("x1")), std::invalid_argument);
  std::vector<std::vector<Expr>> square(3, std::vector<Expr>(3, Expr::constant(0.0)));
  EXPECT_THROW(PoissonSystem(kXyz, square, ScalarField(Expr::variable(0), 2)),
               std::invalid_argument);
}

TEST(PoissonBracketTest, StandardCasimirCommutesWithEnergy) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const double b =
      poisson_bracket(sys, rigid_body::standard_casimir(), sys.hamiltonian(), vec3(0.3, -0.2, 0.5));
  EXPECT_NEAR(b, 0.0, 1e-12);
}

TEST(PoissonBracketTest, SelfBracketVanishes) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const ScalarField f = field("x1^3*x2 - x3/(2 + x1^2)");
  for (const Vector& x : cube_samples(50, 3)) EXPECT_NEAR(poisson_bracket(sys, f, f, x), 0.0, 1e-14);
}

TEST(PoissonBracketTest, Antisymmetric) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const ScalarField f = field("x1*x2 + x3^2");
  const ScalarField g = field("x2 - x1^2*x3");
  for (const Vector& x : cube_samples(50, 4))
    EXPECT_NEAR(poisson_bracket(sys, f, g, x), -poisson_bracket(sys, g, f, x), 1e-14);
}

TEST(PoissonBracketTest, CoordinateBracketOnShortAxis) {
  // Pi_12 = -x3, so {x1, x2} at (0, 0, M0) is -M0.
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const double m0 = 0.7;
  EXPECT_DOUBLE_EQ(poisson_bracket(sys, field("x1"), field("x2"), vec3(0.0, 0.0, m0)), -m0);
}

TEST(PoissonBracketTest, DimensionMismatchThrows) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const ScalarField two(Expr::variable(0), 2);
  EXPECT_THROW(poisson_bracket(sys, two, sys.hamiltonian(), vec3(0, 0, 1)), std::invalid_argument);
  EXPECT_THROW(poisson_bracket(sys, sys.hamiltonian(), sys.hamiltonian(), Vector::Zero(2)),
               std::invalid_argument);
}

TEST(VerifyStructureTest, RigidBodyPasses) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  const auto samples = cube_samples(1000, 11);
  const StructureReport r = verify_structure(sys, samples);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.samples, 1000u);
  EXPECT_LE(r.max_antisymmetry, 1e-12);
  EXPECT_LE(r.max_casimir_residual, 1e-12);
}

TEST(VerifyStructureTest, PerturbedEntryFails) {
  const PoissonSystem sys = rigid_body::make_system(kCaseOne);
  auto pi = sys.pi_entries();
  pi[0][1] = pi[0][1] + Expr::constant(1e-3);
  const PoissonSystem bad(sys.variables(), pi, sys.hamiltonian(), sys.casimirs());
  const StructureReport r = verify_structure(bad, cube_samples(100, 12));
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.max_antisymmetry, 1e-3, 1e-12);
}

TEST(VerifyStructureTest, CoordinateIsNotACasimir) {
  // Pi grad x1 = (0, x3, -x2), first column of Pi.
  const PoissonSystem sys = rigid_body::make_system(kCaseOne).with_casimirs({field("x1")});
  const StructureReport r = verify_structure(sys, cube_samples(100, 13));
  EXPECT_FALSE(r.passed);
  EXPECT_LE(r.max_antisymmetry, 1e-12);
  EXPECT_GT(r.max_casimir_residual, 0.1);
}

TEST(VerifyStructureTest, NonFiniteSampleFails) {
  const PoissonSystem sys =
      rigid_body::make_system(kCaseOne).with_casimirs({field("1/x1")});
  const std::vector<Vector> samples{vec3(0.0, 0.5, 0.5)};
  EXPECT_FALSE(verify_structure(sys, samples).passed);
}

}  // namespace
}  // namespace hpdiss
