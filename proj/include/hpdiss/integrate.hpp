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

#ifndef HPDISS_INTEGRATE_HPP
#define HPDISS_INTEGRATE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpdiss/dissipation.hpp"

namespace hpdiss {

using VectorFieldFn = std::function<Vector(const Vector&)>;

// One classical fourth-order Runge-Kutta step. Returns nullopt if any stage
// produces a non-finite value.
std::optional<Vector> step_rk4(const VectorFieldFn& f, const Vector& x, double dt);

struct IntegrateOptions {
  double t_end = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double sample_interval = 0.0;  // 0 selects t_end / 2000
  double initial_step = 0.0;     // 0 selects a step from the local field scale
  std::size_t max_steps = 100'000'000;
};

enum class IntegrationStatus { Ok, StepUnderflow, NonFinite, MaxSteps };

const char* to_string(IntegrationStatus s);

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  double max_error_estimate = 0.0;  // max normalised error over accepted steps
  double last_step = 0.0;
};

// Samples of x(t) at the requested interval. On failure the samples up to
// the last good step are kept and `status` says why integration stopped.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> h_values;
  std::vector<double> c_values;
  StepStats stats;
  IntegrateOptions options;
  IntegrationStatus status = IntegrationStatus::Ok;
  std::string message;

  std::size_t size() const { return times.size(); }
  bool ok() const { return status == IntegrationStatus::Ok; }
  double span() const { return times.empty() ? 0.0 : times.back() - times.front(); }
};

// Dormand-Prince 5(4) with PI step-size control and the 4th-order continuous
// extension for sampling.
Trajectory integrate_adaptive(const VectorFieldFn& f, const Vector& x0,
                              const IntegrateOptions& options);

// Fills h_values / c_values from the stored states.
void annotate(Trajectory& traj, const ScalarField& hamiltonian, const ScalarField& casimir);

// integrate_adaptive on the dissipated field, annotated with H and the
// field's Casimir.
Trajectory integrate(const DissipatedField& df, const Vector& x0, const IntegrateOptions& options);

struct InvariantReport {
  double h_initial = 0.0;
  double max_h_drift = 0.0;
  double h_threshold = 0.0;
  std::size_t c_violations = 0;
  double max_c_increase = 0.0;  // largest C(t_{k+1}) - C(t_k), may be negative
  bool h_conserved = false;
  bool c_nonincreasing = false;
  bool passed = false;
};

// H must stay within 100 rel_tol |H(0)| + abs_tol of its initial value and C
// must not rise by more than 10 (abs_tol + rel_tol |C(t_k)|) between
// consecutive samples. Tolerances are the ones the trajectory was computed
// with.
InvariantReport monitor(const Trajectory& traj);

// Final state, if every sample with t >= t_final - window is within eps of it.
std::optional<Vector> detect_convergence(const Trajectory& traj, double eps, double window);

// sup of `metric` over the trailing window.
double trailing_window_max(const Trajectory& traj, double window,
                           const std::function<double(const Vector&)>& metric);

}  // namespace hpdiss

#endif  // HPDISS_INTEGRATE_HPP
