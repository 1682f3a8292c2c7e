/* Copyright 2026 The spindir Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/*
 * C interface to libspindir. Objects are opaque handles created by
 * sd_*_create style functions and released with the matching destroy.
 * Every fallible call returns an sd_status; on failure sd_last_error()
 * holds a message for the calling thread until its next failing call.
 *
 * Matrices cross the boundary row-major as sd_complex, indexed by m from
 * -j (row 0). Spins and magnetic numbers are passed as twice-values.
 */

#ifndef SPINDIR_SPINDIR_H
#define SPINDIR_SPINDIR_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPINDIR_BUILDING_LIBRARY)
#define SD_API __attribute__((visibility("default")))
#else
#define SD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
    SD_OK = 0,
    SD_INVALID_ARGUMENT = 1,
    SD_VALIDATION_FAILED = 2,
    SD_NONCONVERGENCE = 3,
    SD_ZERO_PROBABILITY = 4,
    SD_SHELL_OVERLAP = 5,
    SD_INTERNAL = 6
} sd_status;

typedef enum sd_sample_model { SD_MODEL_LIMIT = 0, SD_MODEL_FINITE = 1 } sd_sample_model;

typedef struct sd_complex {
    double re;
    double im;
} sd_complex;

typedef struct sd_model sd_model;
typedef struct sd_state sd_state;
typedef struct sd_report sd_report;
typedef struct sd_scan sd_scan;
typedef struct sd_batch sd_batch;

typedef struct sd_model_config {
    int twice_j;
    double t;
    double lambda;
    size_t eta_nodes;
    size_t phi_nodes;
    size_t radial_nodes;
} sd_model_config;

SD_API const char *sd_version(void);
SD_API const char *sd_last_error(void);
/* Smallest admissible |t| reported by the last SD_SHELL_OVERLAP, else 0. */
SD_API double sd_last_min_admissible_t(void);

/* Fills the library defaults (j = 1/2, t = 1, lambda = 0.1, 64 x 128 sphere,
   2048 radial nodes). */
SD_API void sd_model_config_default(sd_model_config *config);

/* Validates parameters and builds the grids. Grid self-test failures are
   SD_VALIDATION_FAILED. */
SD_API sd_status sd_model_create(const sd_model_config *config, sd_model **out);
SD_API void sd_model_destroy(sd_model *model);
SD_API int sd_model_dimension(const sd_model *model);

SD_API sd_status sd_state_basis(int twice_j, int twice_m, sd_state **out);
SD_API sd_status sd_state_coherent(int twice_j, double theta, double phi,
                                   sd_state **out);
SD_API sd_status sd_state_rotated(int twice_j, int twice_m, double theta,
                                  double phi, sd_state **out);
SD_API sd_status sd_state_mixed(int twice_j, sd_state **out);
/* count must equal (twice_j+1)^2. */
SD_API sd_status sd_state_from_matrix(int twice_j, const sd_complex *entries,
                                      size_t count, double trace_tolerance,
                                      sd_state **out);
SD_API void sd_state_destroy(sd_state *state);
SD_API int sd_state_dimension(const sd_state *state);

/* Kraus operator Omega(x n) and POVM density Omega^dagger Omega; capacity is
   the number of sd_complex slots in out (at least d*d). */
SD_API sd_status sd_omega(const sd_model *model, double x, double theta,
                          double phi, sd_complex *out, size_t capacity);
SD_API sd_status sd_povm_element(const sd_model *model, double x, double theta,
                                 double phi, sd_complex *out, size_t capacity);
/* Ascending eigenvalues of the Hermitian part of a dim x dim matrix. */
SD_API sd_status sd_hermitian_eigenvalues(int dim, const sd_complex *matrix,
                                          double *out);

typedef struct sd_completeness {
    double coherent;
    double finite;
    double limit;
    int coherent_warning;
    int finite_warning;
    int limit_warning;
} sd_completeness;

SD_API sd_status sd_completeness_run(const sd_model *model, sd_completeness *out);

/* Invariant suite; a failing check is not an error, query sd_report_passed. */
SD_API sd_status sd_audit_run(const sd_model *model, uint64_t seed,
                              sd_report **out);
SD_API void sd_report_destroy(sd_report *report);
SD_API size_t sd_report_size(const sd_report *report);
SD_API int sd_report_passed(const sd_report *report);

typedef struct sd_check {
    const char *name;
    double deviation;
    double tolerance;
    int passed;
    int warning;
    const char *note;
} sd_check;

/* Strings stay valid for the lifetime of the report. */
SD_API sd_status sd_report_check(const sd_report *report, size_t index,
                                 sd_check *out);

typedef struct sd_scan_row {
    double lambda;
    int twice_m;
    double shell_mass;
    double limit_mass;
    double abs_error;
    double shell_probability;
    double limit_probability;
} sd_scan_row;

/* Shell masses per lambda and contributing m; lambdas keep the given
   order. The model's own lambda is ignored. */
SD_API sd_status sd_convergence_scan(const sd_model *model, const sd_state *state,
                                     const double *lambdas, size_t count,
                                     sd_scan **out);
SD_API void sd_scan_destroy(sd_scan *scan);
SD_API size_t sd_scan_size(const sd_scan *scan);
SD_API sd_status sd_scan_row_at(const sd_scan *scan, size_t index, sd_scan_row *out);
/* 1 if abs_error does not increase as lambda decreases, per m, within slack. */
SD_API int sd_scan_monotone(const sd_scan *scan, double slack);

typedef struct sd_record {
    int has_m;
    int twice_m;
    double x;
    double theta;
    double phi;
    double density;
} sd_record;

typedef struct sd_summary {
    double mean_direction[3];
    double concentration;
    double direction_standard_error;
    double concentration_standard_error;
    size_t used;
    size_t unassigned;
    double normalization_deviation;
} sd_summary;

typedef struct sd_shell_count {
    int twice_m;
    size_t count;
    double probability;
} sd_shell_count;

SD_API sd_status sd_sample(const sd_model *model, const sd_state *state,
                           sd_sample_model kind, size_t count, uint64_t seed,
                           sd_batch **out);
SD_API void sd_batch_destroy(sd_batch *batch);
SD_API size_t sd_batch_size(const sd_batch *batch);
SD_API sd_status sd_batch_record(const sd_batch *batch, size_t index, sd_record *out);
SD_API sd_status sd_batch_summary(const sd_batch *batch, sd_summary *out);
/* Contributing shells; writes up to capacity entries, *written receives the
   number of shells. */
SD_API sd_status sd_batch_shells(const sd_batch *batch, sd_shell_count *out,
                                 size_t capacity, size_t *written);

#ifdef __cplusplus
}
#endif

#endif /* SPINDIR_SPINDIR_H */
