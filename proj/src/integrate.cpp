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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hpdiss {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller exponents and step-change limits.
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

double error_norm(const Vector& err, const Vector& x0, const Vector& x1, double rtol,
                  double atol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::fabs(x0[i]), std::fabs(x1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const VectorFieldFn& f, const Vector& x0, const Vector& k1, double t_end,
                    double rtol, double atol, std::size_t& evals) {
  Vector sc = (atol + rtol * x0.cwiseAbs().array()).matrix();
  const double dnf = (k1.array() / sc.array()).matrix().squaredNorm() / double(x0.size());
  const double dny = (x0.array() / sc.array()).matrix().squaredNorm() / double(x0.size());
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, t_end);
  const Vector x1 = x0 + h * k1;
  const Vector k2 = f(x1);
  ++evals;
  const double der2 =
      std::sqrt(((k2 - k1).array() / sc.array()).matrix().squaredNorm() / double(x0.size())) / h;
  const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
  const double h1 =
      der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
  return std::min({100 * h, h1, t_end});
}

}  // namespace

const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Ok:
      return "ok";
    case IntegrationStatus::StepUnderflow:
      return "step size underflow";
    case IntegrationStatus::NonFinite:
      return "non-finite state";
    case IntegrationStatus::MaxSteps:
      return "step limit reached";
  }
  return "unknown";
}

std::optional<Vector> step_rk4(const VectorFieldFn& f, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  const Vector k1 = f(x);
  if (!all_finite(k1)) return std::nullopt;
  const Vector k2 = f(x + 0.5 * dt * k1);
  if (!all_finite(k2)) return std::nullopt;
  const Vector k3 = f(x + 0.5 * dt * k2);
  if (!all_finite(k3)) return std::nullopt;
  const Vector k4 = f(x + dt * k3);
  if (!all_finite(k4)) return std::nullopt;
  Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!all_finite(next)) return std::nullopt;
  return next;
}

Trajectory integrate_adaptive(const VectorFieldFn& f, const Vector& x0,
                              const IntegrateOptions& options) {
  if (!(options.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (options.sample_interval < 0.0)
    throw std::invalid_argument("sample interval must be non-negative");
  if (!all_finite(x0)) throw std::invalid_argument("initial state must be finite");

  Trajectory traj;
  traj.options = options;
  if (traj.options.sample_interval == 0.0) traj.options.sample_interval = options.t_end / 2000.0;
  const double t_end = options.t_end;
  const double dt_sample = traj.options.sample_interval;
  const double rtol = options.rel_tol;
  const double atol = options.abs_tol;
  const double h_min = 1e-14 * t_end;

  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  std::size_t next_sample = 1;
  auto sample_time = [&](std::size_t k) {
    return std::min(static_cast<double>(k) * dt_sample, t_end);
  };

  StepStats& st = traj.stats;
  double t = 0.0;
  Vector x = x0;
  Vector k1 = f(x);
  ++st.evaluations;
  if (!all_finite(k1)) {
    traj.status = IntegrationStatus::NonFinite;
    traj.message = "field is non-finite at the initial state";
    return traj;
  }
  double h = options.initial_step > 0.0
                 ? options.initial_step
                 : initial_step(f, x, k1, t_end, rtol, atol, st.evaluations);
  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t_end) {
    if (st.accepted + st.rejected >= options.max_steps) {
      traj.status = IntegrationStatus::MaxSteps;
      traj.message = "step limit reached at t=" + std::to_string(t);
      return traj;
    }
    if (h < h_min) {
      traj.status = IntegrationStatus::StepUnderflow;
      traj.message = "step size underflow at t=" + std::to_string(t);
      return traj;
    }
    bool final_step = false;
    if (t + h >= t_end || t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    const Vector k2 = f(x + h * (a21 * k1));
    const Vector k3 = f(x + h * (a31 * k1 + a32 * k2));
    const Vector k4 = f(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = f(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = f(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector x_new = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vector k7 = f(x_new);
    st.evaluations += 6;

    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, x, x_new, rtol, atol);

    if (!std::isfinite(en)) {
      ++st.rejected;
      h *= kMinFactor;
      last_rejected = true;
      continue;
    }

    if (en <= 1.0) {
      if (!all_finite(x_new)) {
        traj.status = IntegrationStatus::NonFinite;
        traj.message = "non-finite state at t=" + std::to_string(t + h);
        return traj;
      }
      const double t_new = final_step ? t_end : t + h;
      // Continuous extension over [t, t_new].
      if (next_sample < std::numeric_limits<std::size_t>::max() &&
          sample_time(next_sample) <= t_new) {
        const Vector ydiff = x_new - x;
        const Vector bspl = h * k1 - ydiff;
        const Vector r4 = ydiff - h * k7 - bspl;
        const Vector r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (sample_time(next_sample) <= t_new) {
          const double ts = sample_time(next_sample);
          if (ts == t_new) {
            traj.times.push_back(t_new);
            traj.states.push_back(x_new);
          } else {
            const double th = (ts - t) / h;
            const double th1 = 1.0 - th;
            traj.times.push_back(ts);
            traj.states.push_back(x + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
          }
          if (ts >= t_end) {
            next_sample = std::numeric_limits<std::size_t>::max();
            break;
          }
          ++next_sample;
        }
      }
      ++st.accepted;
      st.max_error_estimate = std::max(st.max_error_estimate, en);
      st.last_step = h;
      t = t_new;
      x = x_new;
      k1 = k7;

      double fac = kSafety * std::pow(std::max(en, 1e-10), -kAlpha) * std::pow(err_old, kBeta);
      fac = std::clamp(fac, kMinFactor, kMaxFactor);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_old = std::max(en, 1e-4);
      h *= fac;
      last_rejected = false;
    } else {
      ++st.rejected;
      const double fac = std::max(kMinFactor, kSafety * std::pow(en, -kAlpha));
      h *= fac;
      last_rejected = true;
    }
  }
  return traj;
}

void annotate(Trajectory& traj, const ScalarField& hamiltonian, const ScalarField& casimir) {
  traj.h_values.resize(traj.size());
  traj.c_values.resize(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    traj.h_values[k] = hamiltonian.value(as_span(traj.states[k]));
    traj.c_values[k] = casimir.value(as_span(traj.states[k]));
  }
}

Trajectory integrate(const DissipatedField& df, const Vector& x0, const IntegrateOptions& options) {
  if (static_cast<std::size_t>(x0.size()) != df.dimension())
    throw std::invalid_argument("initial state has " + std::to_string(x0.size()) +
                                " entries, system dimension is " +
                                std::to_string(df.dimension()));
  Trajectory traj =
      integrate_adaptive([&df](const Vector& x) { return df(x); }, x0, options);
  annotate(traj, df.system().hamiltonian(), df.casimir());
  return traj;
}

InvariantReport monitor(const Trajectory& traj) {
  if (traj.size() == 0) throw std::invalid_argument("monitor: empty trajectory");
  if (traj.h_values.size() != traj.size() || traj.c_values.size() != traj.size())
    throw std::invalid_argument("monitor: trajectory is not annotated with H and C");
  const double rtol = traj.options.rel_tol;
  const double atol = traj.options.abs_tol;
  InvariantReport r;
  r.h_initial = traj.h_values.front();
  r.h_threshold = 100.0 * rtol * std::fabs(r.h_initial) + atol;
  r.max_c_increase = -INFINITY;
  bool finite = true;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double drift = std::fabs(traj.h_values[k] - r.h_initial);
    if (!std::isfinite(drift)) finite = false;
    r.max_h_drift = std::max(r.max_h_drift, drift);
    if (k + 1 < traj.size()) {
      const double c0 = traj.c_values[k];
      const double rise = traj.c_values[k + 1] - c0;
      if (!std::isfinite(rise)) finite = false;
      r.max_c_increase = std::max(r.max_c_increase, rise);
      if (rise > 10.0 * (atol + rtol * std::fabs(c0))) ++r.c_violations;
    }
  }
  if (traj.size() == 1) r.max_c_increase = 0.0;
  r.h_conserved = finite && r.max_h_drift <= r.h_threshold;
  r.c_nonincreasing = finite && r.c_violations == 0;
  r.passed = r.h_conserved && r.c_nonincreasing;
  return r;
}

double trailing_window_max(const Trajectory& traj, double window,
                           const std::function<double(const Vector&)>& metric) {
  if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
  const double t_start = traj.times.back() - window;
  double worst = 0.0;
  for (std::size_t k = traj.size(); k-- > 0;) {
    if (traj.times[k] < t_start) break;
    const double m = metric(traj.states[k]);
    if (!std::isfinite(m)) return INFINITY;
    worst = std::max(worst, m);
  }
  return worst;
}

std::optional<Vector> detect_convergence(const Trajectory& traj, double eps, double window) {
  if (traj.size() == 0) return std::nullopt;
  if (!(window < traj.span()) && traj.size() > 1)
    throw std::invalid_argument("convergence window must be shorter than the trajectory span");
  const Vector& last = traj.states.back();
  const double d =
      trailing_window_max(traj, window, [&last](const Vector& x) { return (x - last).norm(); });
  if (d <= eps) return last;
  return std::nullopt;
}

}  // namespace hpdiss
