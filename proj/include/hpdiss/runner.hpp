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

#ifndef HPDISS_RUNNER_HPP
#define HPDISS_RUNNER_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "hpdiss/config.hpp"
#include "json.hpp"

namespace hpdiss {

// Environment variable that overrides [output] directory.
inline constexpr const char* kOutputDirEnv = "HPDISS_OUTPUT_DIR";

struct RunResult {
  Trajectory trajectory;
  InvariantReport invariants;
  nlohmann::json report;
  std::filesystem::path output_dir;  // empty when nothing was written
  bool passed = false;
};

// Resolves the output directory: explicit override, then $HPDISS_OUTPUT_DIR,
// then the config's own setting relative to its file.
std::filesystem::path resolve_output_dir(const RunConfig& cfg,
                                         const std::filesystem::path& override_dir = {});

// Integrates, monitors invariants, runs the requested analysis and writes the
// trajectory, the report and plot data. passed is false iff an invariant
// monitor or a requested certificate fails, or integration stops early.
RunResult run(const RunConfig& cfg, const std::filesystem::path& override_dir = {});

// Structure and dissipation-identity sampling only; no integration.
RunResult verify(const RunConfig& cfg);

struct SweepResult {
  nlohmann::json summary;
  std::size_t failures = 0;
};

// Runs every *.ini file in `config_dir`, at most `jobs` at a time, each
// writing to <output_root>/<config stem>.
SweepResult sweep(const std::filesystem::path& config_dir, const std::filesystem::path& output_root,
                  unsigned jobs);

// Delimited text: header "t,<vars>,H,C", one sample per row, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::vector<std::string>& variables,
                          const std::filesystem::path& path);
Trajectory read_trajectory_csv(const std::filesystem::path& path,
                               std::vector<std::string>* variables = nullptr);

// Writes <prefix>_polyline.csv (state samples) and <prefix>_series.csv
// (t plus each coordinate) and returns both paths.
std::vector<std::filesystem::path> emit_plot_data(const Trajectory& traj,
                                                  const std::vector<std::string>& variables,
                                                  const std::filesystem::path& prefix);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const InvariantReport& r);
nlohmann::json to_json(const EquilibriumReport& r);
nlohmann::json to_json(const LyapunovCertificate& c);
nlohmann::json to_json(const StructureReport& r);

}  // namespace hpdiss

#endif  // HPDISS_RUNNER_HPP
