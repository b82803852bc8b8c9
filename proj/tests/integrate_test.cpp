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

#include "hpdiss/integrate.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "hpdiss/rigid_body.hpp"

namespace hpdiss {
namespace {

const rigid_body::InertiaTriple kI{4.0, 1.5, 1.0};

Vector vec3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }
Vector reference_x0() { return vec3(-0.1, 0.2, 0.175); }

IntegrateOptions opts(double t_end, double tol = 1e-10) {
  IntegrateOptions o;
  o.t_end = t_end;
  o.rel_tol = o.abs_tol = tol;
  return o;
}

double max_h_drift(const Trajectory& t) {
  double d = 0.0;
  for (double h : t.h_values) d = std::max(d, std::fabs(h - t.h_values.front()));
  return d;
}

TEST(StepRk4Test, ZeroFieldIsIdentity) {
  const Vector x = vec3(1.0, -2.0, 3.5);
  const auto y = step_rk4([](const Vector& v) { return Vector::Zero(v.size()).eval(); }, x, 0.3);
  ASSERT_TRUE(y);
  EXPECT_EQ(*y, x);
}

TEST(StepRk4Test, LinearDecayPolynomial) {
  // 1 - dt + dt^2/2 - dt^3/6 + dt^4/24 at dt = 0.1
  const auto y = step_rk4([](const Vector& v) { return (-v).eval(); }, Vector::Ones(1), 0.1);
  ASSERT_TRUE(y);
  EXPECT_NEAR((*y)[0], 0.9048375, 1e-15);
}

TEST(StepRk4Test, RejectsNonPositiveStep) {
  const auto f = [](const Vector& v) { return v; };
  EXPECT_THROW(step_rk4(f, Vector::Ones(1), 0.0), std::invalid_argument);
  EXPECT_THROW(step_rk4(f, Vector::Ones(1), -1.0), std::invalid_argument);
}

TEST(StepRk4Test, NonFiniteStageSignalsFailure) {
  const auto f = [](const Vector& v) { return (v.array() / (v.array() - 1.0)).matrix().eval(); };
  EXPECT_FALSE(step_rk4(f, Vector::Ones(1), 0.1));
}

TEST(IntegrateAdaptiveTest, ExponentialDecay) {
  IntegrateOptions o;
  o.t_end = 10.0;
  o.rel_tol = 1e-8;
  o.abs_tol = 1e-12;
  o.sample_interval = 0.01;
  const Trajectory t = integrate_adaptive([](const Vector& v) { return (-v).eval(); },
                                          Vector::Ones(1), o);
  ASSERT_TRUE(t.ok());
  ASSERT_EQ(t.size(), 1001u);
  for (std::size_t k = 0; k < t.size(); ++k)
    EXPECT_LE(std::fabs(t.states[k][0] - std::exp(-t.times[k])), 10 * o.rel_tol) << t.times[k];
}

TEST(IntegrateAdaptiveTest, SamplesOnRequestedGrid) {
  IntegrateOptions o = opts(5.0);
  const Trajectory t = integrate_adaptive([](const Vector& v) { return (-v).eval(); },
                                          Vector::Ones(1), o);
  ASSERT_EQ(t.size(), 2001u);
  EXPECT_EQ(t.times.front(), 0.0);
  EXPECT_DOUBLE_EQ(t.times.back(), 5.0);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_GT(t.times[k], t.times[k - 1]);
  EXPECT_EQ(t.states.size(), t.times.size());
  EXPECT_GT(t.stats.accepted, 0u);
}

TEST(IntegrateAdaptiveTest, RejectsBadOptions) {
  const auto f = [](const Vector& v) { return v; };
  EXPECT_THROW(integrate_adaptive(f, Vector::Ones(1), opts(0.0)), std::invalid_argument);
  EXPECT_THROW(integrate_adaptive(f, Vector::Ones(1), opts(1.0, 0.0)), std::invalid_argument);
}

TEST(IntegrateAdaptiveTest, BlowUpKeepsPartialTrajectory) {
  // x' = x^2 from 1 blows up at t = 1.
  const Trajectory t = integrate_adaptive(
      [](const Vector& v) { return v.cwiseProduct(v).eval(); }, Vector::Ones(1), opts(2.0));
  EXPECT_FALSE(t.ok());
  EXPECT_FALSE(t.message.empty());
  ASSERT_GT(t.size(), 1u);
  EXPECT_LT(t.times.back(), 1.0);
  EXPECT_TRUE(std::isfinite(t.states.back()[0]));
}

TEST(IntegrateTest, FreeRigidBodyConservesBoth) {
  const auto c = rigid_body::make_case(kI, rigid_body::CaseId::I, 0.0, Dissipation::Off);
  const Trajectory t = integrate(c.field, reference_x0(), opts(100.0));
  ASSERT_TRUE(t.ok());
  EXPECT_LE(max_h_drift(t), 1e-9);
  double c_drift = 0.0;
  for (double v : t.c_values) c_drift = std::max(c_drift, std::fabs(v - t.c_values.front()));
  EXPECT_LE(c_drift, 1e-9);
  EXPECT_FALSE(detect_convergence(t, 1e-4, 10.0));
}

TEST(IntegrateTest, AnnotationRecomputedFromStates) {
  const auto c = rigid_body::make_case(kI, rigid_body::CaseId::I);
  const Trajectory t = integrate(c.field, reference_x0(), opts(20.0));
  for (std::size_t k = 0; k < t.size(); k += 97) {
    EXPECT_EQ(t.h_values[k], c.field.hamiltonian(t.states[k]));
    EXPECT_EQ(t.c_values[k], c.field.casimir_value(t.states[k]));
  }
}

TEST(IntegrateTest, EquilibriumStaysPut) {
  const auto c = rigid_body::make_case(kI, rigid_body::CaseId::I);
  const Vector xe = vec3(0.0, 0.0, 0.3);
  const Trajectory t = integrate(c.field, xe, opts(50.0));
  for (const Vector& x : t.states) EXPECT_LE((x - xe).cwiseAbs().maxCoeff(), 1e-10);
}

class CaseOneRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto c = rigid_body::make_case(kI, rigid_body::CaseId::I);
    traj_ = new Trajectory(integrate(c.field, reference_x0(), opts(2000.0)));
  }
  static void TearDownTestSuite() { delete traj_; }
  static Trajectory* traj_;
};
Trajectory* CaseOneRun::traj_ = nullptr;

TEST_F(CaseOneRun, EnergyDriftSmall) {
  ASSERT_TRUE(traj_->ok());
  EXPECT_LE(max_h_drift(*traj_), 1e-8);
}

TEST_F(CaseOneRun, MonitorPasses) {
  const InvariantReport r = monitor(*traj_);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.h_conserved);
  EXPECT_TRUE(r.c_nonincreasing);
  EXPECT_EQ(r.c_violations, 0u);
  EXPECT_DOUBLE_EQ(r.h_threshold, 100 * 1e-10 * std::fabs(r.h_initial) + 1e-10);
}

TEST_F(CaseOneRun, InjectedEnergyJumpFails) {
  Trajectory t = *traj_;
  t.h_values[t.size() / 2] += 1e-3;
  const InvariantReport r = monitor(t);
  EXPECT_FALSE(r.h_conserved);
  EXPECT_FALSE(r.passed);
}

TEST_F(CaseOneRun, InjectedCasimirRiseFails) {
  Trajectory t = *traj_;
  for (std::size_t k = t.size() / 2; k < t.size(); ++k) t.c_values[k] += 1e-6;
  const InvariantReport r = monitor(t);
  EXPECT_EQ(r.c_violations, 1u);
  EXPECT_FALSE(r.passed);
}

TEST_F(CaseOneRun, ConvergesToShortAxis) {
  const auto limit = detect_convergence(*traj_, 1e-4, 0.1 * traj_->span());
  ASSERT_TRUE(limit);
  const double h0 = traj_->h_values.front();
  EXPECT_LE(((*limit) - vec3(0.0, 0.0, std::sqrt(2.0 * 1.0 * h0))).norm(), 1e-4);
  EXPECT_NEAR(std::sqrt(2.0 * h0), 0.24452334585202015, 1e-15);
}

TEST_F(CaseOneRun, TrailingWindowMetric) {
  const double w = 0.1 * traj_->span();
  const double off_axis =
      trailing_window_max(*traj_, w, [](const Vector& x) { return std::hypot(x[0], x[1]); });
  EXPECT_LE(off_axis, 1e-4);
  const double whole =
      trailing_window_max(*traj_, traj_->span(), [](const Vector& x) { return std::hypot(x[0], x[1]); });
  EXPECT_GT(whole, 0.2);
}

TEST(MonitorTest, CaseTwoAgainstStandardCasimir) {
  // C2 = -C0 decreases, so C0 rises along the same run.
  const auto c = rigid_body::make_case(kI, rigid_body::CaseId::II);
  Trajectory t = integrate(c.field, reference_x0(), opts(200.0));
  EXPECT_TRUE(monitor(t).passed);
  annotate(t, c.field.system().hamiltonian(), rigid_body::standard_casimir());
  const InvariantReport r = monitor(t);
  EXPECT_TRUE(r.h_conserved);
  EXPECT_FALSE(r.c_nonincreasing);
  EXPECT_GT(r.c_violations, 0u);
}

TEST(MonitorTest, EnergyDriftMonotoneInTolerance) {
  const auto c = rigid_body::make_case(kI, rigid_body::CaseId::I);
  double previous = INFINITY;
  for (double tol : {1e-8, 5e-9, 2.5e-9}) {
    const double drift = max_h_drift(integrate(c.field, reference_x0(), opts(2000.0, tol)));
    EXPECT_LE(drift, previous) << tol;
    previous = drift;
  }
}

TEST(DetectConvergenceTest, ConstantTrajectory) {
  Trajectory t;
  for (int k = 0; k <= 10; ++k) {
    t.times.push_back(k);
    t.states.push_back(vec3(1.0, 2.0, 3.0));
  }
  const auto limit = detect_convergence(t, 1e-12, 5.0);
  ASSERT_TRUE(limit);
  EXPECT_EQ(*limit, vec3(1.0, 2.0, 3.0));
  EXPECT_THROW(detect_convergence(t, 1e-12, 10.0), std::invalid_argument);
}

}  // namespace
}  // namespace hpdiss
