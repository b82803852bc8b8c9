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

// hpdiss command-line driver. Talks to the library only through hpdiss.h.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hpdiss/hpdiss.h"
#include "json.hpp"

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitError = 2;

int report_error(hpd_status status) {
  std::cerr << "hpdiss: " << hpd_status_string(status) << ": " << hpd_last_error() << "\n";
  return kExitError;
}

void print_summary(const nlohmann::json& rep) {
  auto line = [](const std::string& key, const nlohmann::json& v) {
    std::cout << "  " << key << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  };
  if (rep.contains("integration")) {
    const auto& in = rep["integration"];
    line("integration", in["status"]);
    line("t_end", in["t_end"]);
    line("samples", in["samples"]);
  }
  if (rep.contains("invariants")) {
    line("max |H(t)-H(0)|", rep["invariants"]["max_h_drift"]);
    line("C nonincreasing", rep["invariants"]["c_nonincreasing"]);
  }
  if (rep.contains("conservation_note")) line("note", rep["conservation_note"]);
  if (rep.contains("certificate")) line("certificate", rep["certificate"]["verdict"]);
  if (rep.contains("detected_limit")) line("detected limit", rep["detected_limit"]);
  if (rep.contains("predicted_limit")) line("predicted limit", rep["predicted_limit"]);
  if (rep.contains("limit_distance")) line("distance", rep["limit_distance"]);
  if (rep.contains("structure")) line("structure", rep["structure"]["passed"]);
  if (rep.contains("dissipation_identities"))
    line("dissipation identities", rep["dissipation_identities"]["passed"]);
  if (rep.contains("failures") && !rep["failures"].empty()) line("failures", rep["failures"]);
  if (rep.contains("files")) line("report", rep["files"]["report"]);
}

struct ConfigHandle {
  hpd_config* ptr = nullptr;
  ~ConfigHandle() { hpd_config_free(ptr); }
};

struct ResultHandle {
  hpd_result* ptr = nullptr;
  ~ResultHandle() { hpd_result_free(ptr); }
};

int finish(const ResultHandle& result, bool json_out) {
  const auto rep = nlohmann::json::parse(hpd_result_report(result.ptr));
  if (json_out) {
    std::cout << rep.dump(2) << "\n";
  } else {
    std::cout << (hpd_result_passed(result.ptr) ? "PASS" : "FAIL") << "\n";
    print_summary(rep);
  }
  return hpd_result_passed(result.ptr) ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipated Hamilton-Poisson system simulator and stability analyser"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hpd_version()));

  std::string config_path;
  std::string output_dir;
  bool json_out = false;

  auto* run = app.add_subcommand("run", "Integrate a configured system and analyse the result");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir,
                  "Output directory (overrides $HPDISS_OUTPUT_DIR and the config)");
  run->add_flag("--json", json_out, "Print the full JSON report");

  std::string sweep_dir;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run every *.ini config in a directory");
  sweep->add_option("config-dir", sweep_dir, "Directory of configuration files")
      ->required()
      ->check(CLI::ExistingDirectory);
  sweep->add_option("-o,--output-dir", output_dir,
                    "Root output directory; each config writes to <root>/<name>");
  sweep->add_option("-j,--jobs", jobs, "Configs to run concurrently")->check(CLI::PositiveNumber);
  sweep->add_flag("--json", json_out, "Print the full JSON summary");

  auto* verify = app.add_subcommand("verify", "Sample the structural and dissipation identities");
  verify->add_option("config", config_path, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_flag("--json", json_out, "Print the full JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version report success; usage errors share the error code.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (*run || *verify) {
    ConfigHandle cfg;
    if (auto s = hpd_config_load(config_path.c_str(), &cfg.ptr); s != HPD_OK) return report_error(s);
    ResultHandle result;
    hpd_status s = *run ? hpd_run(cfg.ptr, output_dir.empty() ? nullptr : output_dir.c_str(),
                                  &result.ptr)
                        : hpd_verify(cfg.ptr, &result.ptr);
    if (s != HPD_OK) return report_error(s);
    return finish(result, json_out);
  }

  if (output_dir.empty()) {
    const char* env = std::getenv("HPDISS_OUTPUT_DIR");
    output_dir = env && *env ? env : (sweep_dir + "/out");
  }
  ResultHandle result;
  if (auto s = hpd_sweep(sweep_dir.c_str(), output_dir.c_str(), jobs, &result.ptr); s != HPD_OK)
    return report_error(s);
  if (json_out) return finish(result, true);
  const auto rep = nlohmann::json::parse(hpd_result_report(result.ptr));
  for (const auto& item : rep["configs"]) {
    std::cout << (item["passed"].get<bool>() ? "PASS " : "FAIL ") << item["config"].get<std::string>();
    if (item.contains("error")) std::cout << "  (" << item["error"].get<std::string>() << ")";
    std::cout << "\n";
  }
  return hpd_result_passed(result.ptr) ? 0 : kExitFailedCheck;
}
