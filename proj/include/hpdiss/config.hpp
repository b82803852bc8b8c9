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

#ifndef HPDISS_CONFIG_HPP
#define HPDISS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpdiss/integrate.hpp"
#include "hpdiss/rigid_body.hpp"

namespace hpdiss {

// Malformed or invalid configuration. For syntax errors line() is the
// 1-based line in the file; validation errors carry the offending key as
// "section.key" in field() and line() == 0.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, std::size_t line, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

// A file or directory that could not be read or written.
class IoError : public std::runtime_error {
 public:
  IoError(std::filesystem::path path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(std::move(path)) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct RunConfig {
  std::string name;                 // file stem, or "inline"
  std::filesystem::path base_dir;   // relative output paths resolve against this

  ParameterMap parameters;          // named constants visible to every expression

  // [system]
  std::optional<rigid_body::CaseId> preset;
  rigid_body::InertiaTriple inertia;
  double m0 = 0.0;
  std::vector<std::string> variables;
  std::string hamiltonian_text;
  std::string casimir_text;
  Dissipation dissipation = Dissipation::On;
  std::shared_ptr<const DissipatedField> field;
  std::shared_ptr<const rigid_body::RigidBodyCase> rigid;  // presets only

  // [initial]
  Vector x0;

  // [integrator]
  IntegrateOptions integrator;
  double t_end_max = 0.0;  // convergence escalation ceiling; t_end when unset

  // [analysis]
  std::string psi_text;
  std::optional<ScalarField> psi;
  std::optional<Vector> equilibrium;
  int limit_branch = 0;  // +1 / -1 selects the predicted-limit axis branch
  bool detect_convergence = true;
  double convergence_eps = 1e-4;
  double convergence_window = 0.1;  // fraction of the trajectory span

  // [verify]
  std::size_t verify_samples = 1000;
  double verify_box = 1.0;
  std::uint64_t verify_seed = 1;

  // [output]
  std::filesystem::path output_dir = "out";
  std::string trajectory_file = "trajectory.csv";
  std::string report_file = "report.json";
  std::string plot_prefix = "plot";
  bool write_files = true;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".",
                       const std::string& name = "inline");

}  // namespace hpdiss

#endif  // HPDISS_CONFIG_HPP
