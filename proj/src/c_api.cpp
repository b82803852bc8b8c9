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

#include "hpdiss/hpdiss.h"

#include <cstring>
#include <string>

#include "hpdiss/runner.hpp"

struct hpd_expr {
  hpdiss::Expr expr;
  std::vector<std::string> names;
};

struct hpd_field {
  std::shared_ptr<const hpdiss::DissipatedField> field;
};

struct hpd_config {
  hpdiss::RunConfig config;
};

struct hpd_result {
  hpdiss::Trajectory trajectory;
  std::string report;
  std::string output_dir;
  std::size_t dimension = 0;
  bool passed = false;
};

namespace {

thread_local std::string last_error;

hpd_status fail(hpd_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps the exception currently being handled onto a status code.
hpd_status translate_exception() {
  try {
    throw;
  } catch (const hpdiss::ParseError& e) {
    return fail(HPD_PARSE_ERROR, e.what());
  } catch (const hpdiss::ConfigError& e) {
    return fail(HPD_CONFIG_ERROR, e.what());
  } catch (const hpdiss::IoError& e) {
    return fail(HPD_IO_ERROR, e.what());
  } catch (const std::domain_error& e) {
    return fail(HPD_UNSUPPORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HPD_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(HPD_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(HPD_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(HPD_INTERNAL_ERROR, "unknown error");
  }
}

template <class F>
hpd_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (...) {
    return translate_exception();
  }
}

hpdiss::Vector state_from(const double* x, size_t n) {
  return Eigen::Map<const hpdiss::Vector>(x, static_cast<Eigen::Index>(n));
}

hpd_status check_state(const hpd_field* field, const double* x, size_t n) {
  if (!field || !x) return fail(HPD_INVALID_ARGUMENT, "null argument");
  if (n != field->field->dimension())
    return fail(HPD_INVALID_ARGUMENT, "state has " + std::to_string(n) +
                                          " entries, field dimension is " +
                                          std::to_string(field->field->dimension()));
  return HPD_OK;
}

hpd_result* make_result(hpdiss::RunResult&& r, std::size_t dimension) {
  auto* out = new hpd_result;
  out->trajectory = std::move(r.trajectory);
  out->report = r.report.dump(2);
  out->output_dir = r.output_dir.string();
  out->dimension = dimension;
  out->passed = r.passed;
  return out;
}

}  // namespace

extern "C" {

const char* hpd_version(void) { return "1.0.0"; }

const char* hpd_status_string(hpd_status status) {
  switch (status) {
    case HPD_OK:
      return "ok";
    case HPD_INVALID_ARGUMENT:
      return "invalid argument";
    case HPD_PARSE_ERROR:
      return "parse error";
    case HPD_CONFIG_ERROR:
      return "configuration error";
    case HPD_IO_ERROR:
      return "I/O error";
    case HPD_INTEGRATION_ERROR:
      return "integration error";
    case HPD_UNSUPPORTED:
      return "unsupported";
    case HPD_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

const char* hpd_last_error(void) { return last_error.c_str(); }

hpd_status hpd_expr_parse(const char* source, const char* const* variables, size_t n_variables,
                          hpd_expr** out, size_t* error_offset) {
  if (!source || !out || (n_variables && !variables))
    return fail(HPD_INVALID_ARGUMENT, "null argument");
  std::vector<std::string> names;
  for (size_t i = 0; i < n_variables; ++i) {
    if (!variables[i]) return fail(HPD_INVALID_ARGUMENT, "null variable name");
    names.emplace_back(variables[i]);
  }
  try {
    last_error.clear();
    hpdiss::Expr e = hpdiss::parse(source, names);
    *out = new hpd_expr{std::move(e), std::move(names)};
    return HPD_OK;
  } catch (const hpdiss::ParseError& e) {
    if (error_offset) *error_offset = e.offset();
    return fail(HPD_PARSE_ERROR, e.what());
  } catch (...) {
    return translate_exception();
  }
}

hpd_status hpd_expr_eval(const hpd_expr* expr, const double* x, size_t n, double* value) {
  if (!expr || !value || (n && !x)) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *value = expr->expr.eval(std::span<const double>(x, n));
    return HPD_OK;
  });
}

hpd_status hpd_expr_derivative(const hpd_expr* expr, size_t variable, hpd_expr** out) {
  if (!expr || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  if (variable >= expr->names.size())
    return fail(HPD_INVALID_ARGUMENT, "variable index " + std::to_string(variable) + " out of range");
  return guarded([&] {
    *out = new hpd_expr{expr->expr.differentiate(variable), expr->names};
    return HPD_OK;
  });
}

hpd_status hpd_expr_print(const hpd_expr* expr, char* buffer, size_t capacity, size_t* required) {
  if (!expr) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string s = expr->expr.to_string(expr->names);
    if (required) *required = s.size() + 1;
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, s.size());
      std::memcpy(buffer, s.data(), n);
      buffer[n] = '\0';
    }
    return HPD_OK;
  });
}

void hpd_expr_free(hpd_expr* expr) { delete expr; }

hpd_status hpd_rigid_body_field(double i1, double i2, double i3, hpd_rigid_case which, double m0,
                                int dissipation_on, hpd_field** out) {
  if (!out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  if (which < HPD_RIGID_CASE1 || which > HPD_RIGID_CASE3)
    return fail(HPD_INVALID_ARGUMENT, "unknown rigid-body case");
  return guarded([&] {
    auto rc = hpdiss::rigid_body::make_case({i1, i2, i3}, static_cast<hpdiss::rigid_body::CaseId>(which),
                                            m0,
                                            dissipation_on ? hpdiss::Dissipation::On
                                                           : hpdiss::Dissipation::Off);
    *out = new hpd_field{std::make_shared<const hpdiss::DissipatedField>(rc.field)};
    return HPD_OK;
  });
}

size_t hpd_field_dimension(const hpd_field* field) { return field ? field->field->dimension() : 0; }

hpd_status hpd_field_eval(const hpd_field* field, const double* x, size_t n, double* out) {
  if (auto s = check_state(field, x, n); s != HPD_OK) return s;
  if (!out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const hpdiss::Vector f = (*field->field)(state_from(x, n));
    std::copy(f.data(), f.data() + f.size(), out);
    return HPD_OK;
  });
}

hpd_status hpd_field_hamiltonian(const hpd_field* field, const double* x, size_t n, double* value) {
  if (auto s = check_state(field, x, n); s != HPD_OK) return s;
  if (!value) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *value = field->field->hamiltonian(state_from(x, n));
    return HPD_OK;
  });
}

hpd_status hpd_field_casimir(const hpd_field* field, const double* x, size_t n, double* value) {
  if (auto s = check_state(field, x, n); s != HPD_OK) return s;
  if (!value) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *value = field->field->casimir_value(state_from(x, n));
    return HPD_OK;
  });
}

hpd_status hpd_field_lemma1(const hpd_field* field, const double* x, size_t n, hpd_lemma1* out) {
  if (auto s = check_state(field, x, n); s != HPD_OK) return s;
  if (!out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto r = hpdiss::lemma1_check(*field->field, state_from(x, n));
    *out = {r.gh_residual, r.quad_form, r.dependence_defect, r.dependent ? 1 : 0};
    return HPD_OK;
  });
}

hpd_status hpd_field_classify(const hpd_field* field, const double* x, size_t n, double tolerance,
                              hpd_equilibrium* out) {
  if (auto s = check_state(field, x, n); s != HPD_OK) return s;
  if (!out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  if (!(tolerance > 0.0)) return fail(HPD_INVALID_ARGUMENT, "tolerance must be positive");
  return guarded([&] {
    const auto r = hpdiss::classify_point(*field->field, state_from(x, n), tolerance);
    *out = {r.field_residual, r.pi_residual, r.grad_c_norm, r.dependent, r.in_e_xi,
            r.in_e_pi,        r.in_c_star};
    return HPD_OK;
  });
}

hpd_status hpd_field_integrate(const hpd_field* field, const double* x0, size_t n, double t_end,
                               double rel_tol, double abs_tol, double sample_interval,
                               hpd_result** out) {
  if (auto s = check_state(field, x0, n); s != HPD_OK) return s;
  if (!out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    hpdiss::IntegrateOptions opts;
    opts.t_end = t_end;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;
    opts.sample_interval = sample_interval > 0.0 ? sample_interval : 0.0;
    hpdiss::RunResult r;
    r.trajectory = hpdiss::integrate(*field->field, state_from(x0, n), opts);
    r.invariants = hpdiss::monitor(r.trajectory);
    r.report = {{"integration",
                 {{"status", hpdiss::to_string(r.trajectory.status)},
                  {"message", r.trajectory.message},
                  {"samples", r.trajectory.size()},
                  {"accepted_steps", r.trajectory.stats.accepted},
                  {"rejected_steps", r.trajectory.stats.rejected}}},
                {"invariants", hpdiss::to_json(r.invariants)}};
    r.passed = r.trajectory.ok() && r.invariants.passed;
    r.report["passed"] = r.passed;
    *out = make_result(std::move(r), n);
    return HPD_OK;
  });
}

void hpd_field_free(hpd_field* field) { delete field; }

hpd_status hpd_config_load(const char* path, hpd_config** out) {
  if (!path || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new hpd_config{hpdiss::load_config(path)};
    return HPD_OK;
  });
}

hpd_status hpd_config_parse(const char* text, const char* base_dir, hpd_config** out) {
  if (!text || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new hpd_config{hpdiss::parse_config(text, base_dir ? base_dir : ".")};
    return HPD_OK;
  });
}

hpd_field* hpd_config_field(const hpd_config* config) {
  if (!config || !config->config.field) return nullptr;
  return new hpd_field{config->config.field};
}

void hpd_config_free(hpd_config* config) { delete config; }

hpd_status hpd_run(const hpd_config* config, const char* output_dir, hpd_result** out) {
  if (!config || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto r = hpdiss::run(config->config, output_dir ? output_dir : "");
    *out = make_result(std::move(r), config->config.variables.size());
    return HPD_OK;
  });
}

hpd_status hpd_verify(const hpd_config* config, hpd_result** out) {
  if (!config || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = make_result(hpdiss::verify(config->config), config->config.variables.size());
    return HPD_OK;
  });
}

hpd_status hpd_sweep(const char* config_dir, const char* output_dir, unsigned jobs,
                     hpd_result** out) {
  if (!config_dir || !output_dir || !out) return fail(HPD_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = hpdiss::sweep(config_dir, output_dir, jobs);
    auto* r = new hpd_result;
    r->report = s.summary.dump(2);
    r->output_dir = output_dir;
    r->passed = s.failures == 0;
    *out = r;
    return HPD_OK;
  });
}

int hpd_result_passed(const hpd_result* result) { return result && result->passed ? 1 : 0; }

const char* hpd_result_report(const hpd_result* result) {
  return result ? result->report.c_str() : "";
}

const char* hpd_result_output_dir(const hpd_result* result) {
  return result ? result->output_dir.c_str() : "";
}

size_t hpd_result_sample_count(const hpd_result* result) {
  return result ? result->trajectory.size() : 0;
}

size_t hpd_result_dimension(const hpd_result* result) { return result ? result->dimension : 0; }

hpd_status hpd_result_sample(const hpd_result* result, size_t index, double* t, double* state,
                             double* h, double* c) {
  if (!result) return fail(HPD_INVALID_ARGUMENT, "null argument");
  const auto& tr = result->trajectory;
  if (index >= tr.size())
    return fail(HPD_INVALID_ARGUMENT, "sample index " + std::to_string(index) + " out of range");
  if (t) *t = tr.times[index];
  if (state) std::copy(tr.states[index].data(), tr.states[index].data() + tr.states[index].size(), state);
  if (h) *h = index < tr.h_values.size() ? tr.h_values[index] : 0.0;
  if (c) *c = index < tr.c_values.size() ? tr.c_values[index] : 0.0;
  return HPD_OK;
}

void hpd_result_free(hpd_result* result) { delete result; }

}  // extern "C"
