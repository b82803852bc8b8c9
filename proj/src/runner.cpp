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

#include "hpdiss/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <random>
#include <sstream>

namespace hpdiss {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

namespace {

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// JSON has no infinities; report them as strings rather than null.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json to_json(const InvariantReport& r) {
  return {{"h_initial", number(r.h_initial)},
          {"max_h_drift", number(r.max_h_drift)},
          {"h_threshold", number(r.h_threshold)},
          {"h_conserved", r.h_conserved},
          {"c_violations", r.c_violations},
          {"max_c_increase", number(r.max_c_increase)},
          {"c_nonincreasing", r.c_nonincreasing},
          {"passed", r.passed}};
}

json to_json(const EquilibriumReport& r) {
  return {{"point", to_json(r.point)},
          {"field_residual", number(r.field_residual)},
          {"pi_residual", number(r.pi_residual)},
          {"grad_c_norm", number(r.grad_c_norm)},
          {"dependence_defect", number(r.dependence_defect)},
          {"tolerance", r.tolerance},
          {"gradients_dependent", r.dependent},
          {"in_E_xi", r.in_e_xi},
          {"in_E_xi_Pi", r.in_e_pi},
          {"in_C_star", r.in_c_star}};
}

json to_json(const LyapunovCertificate& c) {
  return {{"equilibrium", to_json(c.equilibrium)},
          {"H", c.h_value},
          {"C", c.c_value},
          {"dpsi_dH", c.dpsi_dh},
          {"dpsi_dC", c.dpsi_dc},
          {"gradient", to_json(c.gradient)},
          {"gradient_residual", c.gradient_residual},
          {"hessian", to_json(c.hessian)},
          {"composed_hessian_discrepancy", c.composed_hessian_discrepancy},
          {"min_eigenvalue", c.min_eigenvalue},
          {"definiteness", to_string(c.definiteness)},
          {"verdict", to_string(c.verdict)},
          {"reasons", c.reasons}};
}

json to_json(const StructureReport& r) {
  return {{"samples", r.samples},
          {"max_antisymmetry", number(r.max_antisymmetry)},
          {"max_casimir_residual", number(r.max_casimir_residual)},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

fs::path resolve_output_dir(const RunConfig& cfg, const fs::path& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  if (cfg.output_dir.is_absolute()) return cfg.output_dir;
  return cfg.base_dir / cfg.output_dir;
}

void write_trajectory_csv(const Trajectory& traj, const std::vector<std::string>& variables,
                          const fs::path& path) {
  if (traj.h_values.size() != traj.size() || traj.c_values.size() != traj.size())
    throw std::invalid_argument("trajectory must carry H and C values to be exported");
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << std::setprecision(17);
  out << "t";
  for (const auto& v : variables) out << ',' << v;
  out << ",H,C\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << traj.times[k];
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) out << ',' << traj.states[k][i];
    out << ',' << traj.h_values[k] << ',' << traj.c_values[k] << '\n';
  }
  if (!out) throw IoError(path, "write failed");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw IoError(path, "line " + std::to_string(line) + ": malformed number '" + s + "'");
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(const fs::path& path, std::vector<std::string>* variables) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "missing header");
  const auto header = split_csv(line);
  if (header.size() < 4 || header.front() != "t" || header[header.size() - 2] != "H" ||
      header.back() != "C")
    throw IoError(path, "header must be t,<variables>,H,C");
  const std::size_t n = header.size() - 3;
  if (variables) variables->assign(header.begin() + 1, header.end() - 2);
  Trajectory traj;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != n + 3)
      throw IoError(path, "line " + std::to_string(lineno) + ": expected " +
                              std::to_string(n + 3) + " columns");
    traj.times.push_back(to_double(cells[0], path, lineno));
    Vector x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      x[static_cast<Eigen::Index>(i)] = to_double(cells[i + 1], path, lineno);
    traj.states.push_back(std::move(x));
    traj.h_values.push_back(to_double(cells[n + 1], path, lineno));
    traj.c_values.push_back(to_double(cells[n + 2], path, lineno));
  }
  return traj;
}

std::vector<fs::path> emit_plot_data(const Trajectory& traj,
                                     const std::vector<std::string>& variables,
                                     const fs::path& prefix) {
  if (traj.size() == 0) throw std::invalid_argument("cannot plot an empty trajectory");
  const fs::path polyline = prefix.string() + "_polyline.csv";
  const fs::path series = prefix.string() + "_series.csv";
  {
    std::ofstream out(polyline);
    if (!out) throw IoError(polyline, "cannot open for writing");
    out << std::setprecision(17);
    for (std::size_t i = 0; i < variables.size(); ++i) out << (i ? "," : "") << variables[i];
    out << '\n';
    for (const auto& x : traj.states) {
      for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
      out << '\n';
    }
    if (!out) throw IoError(polyline, "write failed");
  }
  {
    std::ofstream out(series);
    if (!out) throw IoError(series, "cannot open for writing");
    out << std::setprecision(17) << "t";
    for (const auto& v : variables) out << ',' << v;
    out << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
      out << traj.times[k];
      for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) out << ',' << traj.states[k][i];
      out << '\n';
    }
    if (!out) throw IoError(series, "write failed");
  }
  return {polyline, series};
}

namespace {

json system_json(const RunConfig& cfg) {
  json s = {{"variables", cfg.variables},
            {"hamiltonian", cfg.hamiltonian_text},
            {"casimir", cfg.casimir_text},
            {"dissipation", cfg.dissipation == Dissipation::On ? "on" : "off"}};
  if (cfg.rigid) {
    s["preset"] = rigid_body::to_string(cfg.rigid->id);
    s["inertia"] = {cfg.inertia.i1, cfg.inertia.i2, cfg.inertia.i3};
    s["m0"] = cfg.m0;
  } else {
    s["preset"] = nullptr;
  }
  return s;
}

int attracting_axis(const rigid_body::RigidBodyCase& rc) {
  return rc.id == rigid_body::CaseId::I ? 2 : 0;
}

}  // namespace

RunResult run(const RunConfig& cfg, const fs::path& override_dir) {
  if (!cfg.field) throw std::invalid_argument("config has no system");
  const DissipatedField& df = *cfg.field;
  RunResult result;
  json& rep = result.report;
  std::vector<std::string> failures;

  rep["config"] = cfg.name;
  rep["system"] = system_json(cfg);
  rep["initial_state"] = to_json(cfg.x0);

  IntegrateOptions opts = cfg.integrator;
  std::optional<Vector> detected;
  int escalations = 0;
  Trajectory traj;
  for (;;) {
    traj = integrate(df, cfg.x0, opts);
    if (!cfg.detect_convergence || !traj.ok()) break;
    detected = detect_convergence(traj, cfg.convergence_eps, cfg.convergence_window * traj.span());
    if (detected || opts.t_end * 4.0 > cfg.t_end_max * (1.0 + 1e-12)) break;
    opts.t_end *= 4.0;
    ++escalations;
  }

  rep["integration"] = {{"status", to_string(traj.status)},
                        {"message", traj.message},
                        {"t_end", opts.t_end},
                        {"t_reached", traj.times.empty() ? 0.0 : traj.times.back()},
                        {"escalations", escalations},
                        {"rel_tol", opts.rel_tol},
                        {"abs_tol", opts.abs_tol},
                        {"sample_interval", traj.options.sample_interval},
                        {"samples", traj.size()},
                        {"accepted_steps", traj.stats.accepted},
                        {"rejected_steps", traj.stats.rejected},
                        {"evaluations", traj.stats.evaluations},
                        {"max_error_estimate", traj.stats.max_error_estimate}};
  if (!traj.ok()) failures.push_back(std::string("integration: ") + traj.message);

  result.invariants = monitor(traj);
  rep["invariants"] = to_json(result.invariants);
  if (!result.invariants.h_conserved) failures.push_back("H is not conserved");
  if (!result.invariants.c_nonincreasing) failures.push_back("C increases along the trajectory");

  double c_drift = 0.0;
  for (double c : traj.c_values) c_drift = std::max(c_drift, std::fabs(c - traj.c_values.front()));
  const double c_threshold =
      100.0 * opts.rel_tol * std::fabs(traj.c_values.front()) + opts.abs_tol;
  rep["casimir_drift"] = number(c_drift);
  if (cfg.dissipation == Dissipation::Off) {
    const bool both = result.invariants.h_conserved && c_drift <= c_threshold;
    rep["conservation_note"] =
        both ? "dissipation off: H and C both conserved" : "dissipation off: H or C drifted";
    if (c_drift > c_threshold) failures.push_back("C is not conserved with dissipation off");
  }

  if (cfg.equilibrium) {
    rep["equilibrium"] = to_json(classify_point(df, *cfg.equilibrium));
  }
  if (cfg.psi) {
    try {
      const LyapunovCertificate cert = build_certificate(df, *cfg.psi, *cfg.equilibrium);
      json c = to_json(cert);
      c["psi"] = cfg.psi_text;
      rep["certificate"] = c;
      if (!cert.valid()) failures.push_back(std::string("certificate ") + to_string(cert.verdict));
    } catch (const std::invalid_argument& e) {
      rep["certificate"] = {{"psi", cfg.psi_text}, {"verdict", "rejected"}, {"error", e.what()}};
      failures.push_back(std::string("certificate rejected: ") + e.what());
    }
  }

  if (detected) {
    rep["detected_limit"] = to_json(*detected);
    rep["detected_limit_classification"] = to_json(classify_point(df, *detected, 1e-6));
  } else {
    rep["detected_limit"] = nullptr;
  }
  rep["convergence"] = {{"eps", cfg.convergence_eps},
                        {"window_fraction", cfg.convergence_window},
                        {"requested", cfg.detect_convergence}};

  if (cfg.rigid && traj.size() > 1) {
    const int axis = attracting_axis(*cfg.rigid);
    const double dist = trailing_window_max(
        traj, cfg.convergence_window * traj.span(), [axis](const Vector& x) {
          double s = 0.0;
          for (int j = 0; j < 3; ++j)
            if (j != axis) s += x[j] * x[j];
          return std::sqrt(s);
        });
    rep["attracting_axis"] = {{"axis", axis + 1}, {"trailing_window_distance", number(dist)}};
  }

  rep["predicted_limit"] = nullptr;
  rep["limit_distance"] = nullptr;
  if (cfg.limit_branch != 0 && cfg.rigid) {
    const auto predicted =
        predict_limit(df, cfg.x0, rigid_body::axis_resolver(*cfg.rigid, cfg.limit_branch));
    if (predicted) {
      rep["predicted_limit"] = to_json(*predicted);
      if (detected) rep["limit_distance"] = (*detected - *predicted).norm();
    }
  }

  result.passed = failures.empty();
  rep["failures"] = failures;
  rep["passed"] = result.passed;

  if (cfg.write_files) {
    const fs::path dir = resolve_output_dir(cfg, override_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
    write_trajectory_csv(traj, cfg.variables, dir / cfg.trajectory_file);
    const auto plots = emit_plot_data(traj, cfg.variables, dir / cfg.plot_prefix);
    rep["files"] = {{"trajectory", (dir / cfg.trajectory_file).string()},
                    {"report", (dir / cfg.report_file).string()},
                    {"plot_polyline", plots[0].string()},
                    {"plot_series", plots[1].string()}};
    std::ofstream out(dir / cfg.report_file);
    if (!out) throw IoError(dir / cfg.report_file, "cannot open for writing");
    out << rep.dump(2) << '\n';
    if (!out) throw IoError(dir / cfg.report_file, "write failed");
    result.output_dir = dir;
  }
  result.trajectory = std::move(traj);
  return result;
}

RunResult verify(const RunConfig& cfg) {
  if (!cfg.field) throw std::invalid_argument("config has no system");
  const DissipatedField& df = *cfg.field;
  const auto n = static_cast<Eigen::Index>(df.dimension());
  std::mt19937_64 rng(cfg.verify_seed);
  std::uniform_real_distribution<double> coord(-cfg.verify_box, cfg.verify_box);
  std::vector<Vector> samples;
  samples.reserve(cfg.verify_samples);
  for (std::size_t k = 0; k < cfg.verify_samples; ++k) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = coord(rng);
    samples.push_back(std::move(x));
  }

  RunResult result;
  json& rep = result.report;
  rep["config"] = cfg.name;
  rep["system"] = system_json(cfg);
  const StructureReport structure = verify_structure(df.system(), samples);
  rep["structure"] = to_json(structure);

  // Scaled residuals; each must stay below 1e-12.
  double worst_gh = 0.0, worst_quad = 0.0, worst_energy = 0.0;
  std::size_t dependent_points = 0;
  for (const Vector& x : samples) {
    const Lemma1Check l1 = lemma1_check(df, x);
    const Vector gh = df.grad_h(x);
    const Vector gc = df.grad_c(x);
    const double ngh = gh.norm(), ngc = gc.norm();
    worst_gh = std::max(worst_gh, l1.gh_residual / (1.0 + ngh * ngh * ngh));
    worst_quad = std::max(worst_quad, l1.quad_form / (1.0 + ngc * ngc * ngh * ngh));
    const double energy_rate = std::fabs(df(x).dot(gh));
    const double scale = 1.0 + df.system().pi(x).norm() * ngh * ngh + ngh * ngh * ngh * ngc;
    worst_energy = std::max(worst_energy, energy_rate / scale);
    if (l1.dependent) ++dependent_points;
  }
  constexpr double kIdentityTol = 1e-12;
  const bool lemma_ok = worst_gh <= kIdentityTol && worst_quad <= kIdentityTol &&
                        worst_energy <= kIdentityTol;
  rep["dissipation_identities"] = {{"samples", samples.size()},
                                   {"max_scaled_G_gradH", worst_gh},
                                   {"max_scaled_casimir_quadratic_form", worst_quad},
                                   {"max_scaled_energy_rate", worst_energy},
                                   {"dependent_points", dependent_points},
                                   {"tolerance", kIdentityTol},
                                   {"passed", lemma_ok}};
  result.passed = structure.passed && lemma_ok;
  rep["passed"] = result.passed;
  return result;
}

SweepResult sweep(const fs::path& config_dir, const fs::path& output_root, unsigned jobs) {
  std::error_code ec;
  if (!fs::is_directory(config_dir, ec)) throw IoError(config_dir, "not a directory");
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(config_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ini")
      configs.push_back(entry.path());
  std::sort(configs.begin(), configs.end());

  auto one = [&output_root](const fs::path& path) -> json {
    json item = {{"config", path.string()}};
    try {
      const RunConfig cfg = load_config(path);
      const fs::path dir = output_root / path.stem();
      const RunResult r = run(cfg, dir);
      item["passed"] = r.passed;
      item["output_dir"] = dir.string();
      item["failures"] = r.report["failures"];
    } catch (const std::exception& e) {
      item["passed"] = false;
      item["error"] = e.what();
    }
    return item;
  };

  SweepResult result;
  result.summary = {{"configs", json::array()}};
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t start = 0; start < configs.size(); start += width) {
    std::vector<std::future<json>> batch;
    for (std::size_t k = start; k < std::min(configs.size(), start + width); ++k)
      batch.push_back(std::async(std::launch::async, one, configs[k]));
    for (auto& f : batch) {
      json item = f.get();
      if (!item["passed"].get<bool>()) ++result.failures;
      result.summary["configs"].push_back(std::move(item));
    }
  }
  result.summary["failures"] = result.failures;
  result.summary["passed"] = result.failures == 0;
  return result;
}

}  // namespace hpdiss
