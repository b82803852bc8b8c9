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

/* C interface to hpdiss. Every handle is opaque and owned by the caller,
 * who releases it with the matching *_free function. Functions return an
 * hpd_status; on failure hpd_last_error() describes the problem (the message
 * is per thread and valid until the next call on that thread). */

#ifndef HPDISS_HPDISS_H
#define HPDISS_HPDISS_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(HPDISS_BUILDING_LIBRARY)
#    define HPD_API __declspec(dllexport)
#  else
#    define HPD_API __declspec(dllimport)
#  endif
#else
#  define HPD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hpd_status {
  HPD_OK = 0,
  HPD_INVALID_ARGUMENT = 1,
  HPD_PARSE_ERROR = 2,
  HPD_CONFIG_ERROR = 3,
  HPD_IO_ERROR = 4,
  HPD_INTEGRATION_ERROR = 5,
  HPD_UNSUPPORTED = 6,
  HPD_INTERNAL_ERROR = 7
} hpd_status;

typedef struct hpd_expr hpd_expr;
typedef struct hpd_field hpd_field;
typedef struct hpd_config hpd_config;
typedef struct hpd_result hpd_result;

HPD_API const char* hpd_version(void);
HPD_API const char* hpd_status_string(hpd_status status);
HPD_API const char* hpd_last_error(void);

/* ---- expressions -------------------------------------------------------- */

/* On HPD_PARSE_ERROR, *error_offset (if non-null) receives the character
 * offset of the problem. */
HPD_API hpd_status hpd_expr_parse(const char* source, const char* const* variables,
                                  size_t n_variables, hpd_expr** out, size_t* error_offset);
HPD_API hpd_status hpd_expr_eval(const hpd_expr* expr, const double* x, size_t n, double* value);
HPD_API hpd_status hpd_expr_derivative(const hpd_expr* expr, size_t variable, hpd_expr** out);
/* Writes at most `capacity` bytes including the terminator; *required gets
 * the full length + 1. */
HPD_API hpd_status hpd_expr_print(const hpd_expr* expr, char* buffer, size_t capacity,
                                  size_t* required);
HPD_API void hpd_expr_free(hpd_expr* expr);

/* ---- dissipated fields -------------------------------------------------- */

typedef enum hpd_rigid_case {
  HPD_RIGID_CASE1 = 1, /* Casimir C0 */
  HPD_RIGID_CASE2 = 2, /* Casimir -C0 */
  HPD_RIGID_CASE3 = 3  /* Casimir (C0 - m0^2/2)^2 - C0/I1 */
} hpd_rigid_case;

typedef struct hpd_lemma1 {
  double gh_residual;
  double quad_form;
  double dependence_defect;
  int dependent;
} hpd_lemma1;

typedef struct hpd_equilibrium {
  double field_residual;
  double pi_residual;
  double grad_c_norm;
  int dependent;
  int in_e_xi;
  int in_e_pi;
  int in_c_star;
} hpd_equilibrium;

HPD_API hpd_status hpd_rigid_body_field(double i1, double i2, double i3, hpd_rigid_case which,
                                        double m0, int dissipation_on, hpd_field** out);
HPD_API size_t hpd_field_dimension(const hpd_field* field);
HPD_API hpd_status hpd_field_eval(const hpd_field* field, const double* x, size_t n,
                                  double* out);
HPD_API hpd_status hpd_field_hamiltonian(const hpd_field* field, const double* x, size_t n,
                                         double* value);
HPD_API hpd_status hpd_field_casimir(const hpd_field* field, const double* x, size_t n,
                                     double* value);
HPD_API hpd_status hpd_field_lemma1(const hpd_field* field, const double* x, size_t n,
                                    hpd_lemma1* out);
HPD_API hpd_status hpd_field_classify(const hpd_field* field, const double* x, size_t n,
                                      double tolerance, hpd_equilibrium* out);
/* sample_interval <= 0 selects t_end / 2000. Integration failures still
 * return a result (check hpd_result_passed and the report). */
HPD_API hpd_status hpd_field_integrate(const hpd_field* field, const double* x0, size_t n,
                                       double t_end, double rel_tol, double abs_tol,
                                       double sample_interval, hpd_result** out);
HPD_API void hpd_field_free(hpd_field* field);

/* ---- configured runs ---------------------------------------------------- */

HPD_API hpd_status hpd_config_load(const char* path, hpd_config** out);
HPD_API hpd_status hpd_config_parse(const char* text, const char* base_dir, hpd_config** out);
HPD_API hpd_field* hpd_config_field(const hpd_config* config); /* new handle, caller frees */
HPD_API void hpd_config_free(hpd_config* config);

/* output_dir may be NULL: $HPDISS_OUTPUT_DIR, then the config's [output]
 * directory, are used instead. */
HPD_API hpd_status hpd_run(const hpd_config* config, const char* output_dir, hpd_result** out);
HPD_API hpd_status hpd_verify(const hpd_config* config, hpd_result** out);
HPD_API hpd_status hpd_sweep(const char* config_dir, const char* output_dir, unsigned jobs,
                             hpd_result** out);

HPD_API int hpd_result_passed(const hpd_result* result);
HPD_API const char* hpd_result_report(const hpd_result* result); /* JSON */
HPD_API const char* hpd_result_output_dir(const hpd_result* result);
HPD_API size_t hpd_result_sample_count(const hpd_result* result);
HPD_API size_t hpd_result_dimension(const hpd_result* result);
/* state receives hpd_result_dimension() values; any out pointer may be NULL. */
HPD_API hpd_status hpd_result_sample(const hpd_result* result, size_t index, double* t,
                                     double* state, double* h, double* c);
HPD_API void hpd_result_free(hpd_result* result);

#ifdef __cplusplus
}
#endif

#endif /* HPDISS_HPDISS_H */
