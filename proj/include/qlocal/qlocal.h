// Copyright 2026 The qlocal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the qlocal library. Every function returns a qlocal_status;
 * on failure qlocal_last_error() describes the problem (thread-local). Strings
 * returned through char** outputs are owned by the caller and released with
 * qlocal_string_free. */

#pragma once

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QLOCAL_API __declspec(dllexport)
#else
#define QLOCAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlocal_status {
    QLOCAL_OK = 0,
    QLOCAL_ERR_INVALID_ARGUMENT = 1,
    QLOCAL_ERR_PARSE = 2,
    QLOCAL_ERR_INVARIANT = 3,
    QLOCAL_ERR_INFEASIBLE = 4,
    QLOCAL_ERR_UNKNOWN_NAME = 5,
    QLOCAL_ERR_NO_REFERENCE = 6,
    QLOCAL_ERR_INTERNAL = 7
} qlocal_status;

typedef enum qlocal_format { QLOCAL_FORMAT_JSON = 0, QLOCAL_FORMAT_CSV = 1 } qlocal_format;

typedef struct qlocal_model qlocal_model;

typedef struct qlocal_options {
    uint64_t seed;            /* restart seed, default 0 */
    int restarts;             /* numeric solver restarts, default 20 */
    int max_iter;             /* iterations per restart, default 200 */
    double tolerance;         /* feasibility threshold, default 1e-9 */
    int threads;              /* grid workers, default 1 */
    int with_lmcc;            /* include the LMCC tree, default 1 */
    int require_feasible;     /* report QLOCAL_ERR_INFEASIBLE when any point is not feasible */
    qlocal_format format;     /* default JSON lines */
} qlocal_options;

QLOCAL_API void qlocal_options_init(qlocal_options *options);

QLOCAL_API const char *qlocal_last_error(void);
QLOCAL_API const char *qlocal_version(void);
QLOCAL_API void qlocal_string_free(char *text);

/* Model from a JSON description. Warnings (may be NULL) receive a newline
 * separated list, empty when there are none. */
QLOCAL_API qlocal_status qlocal_model_from_json(const char *text, qlocal_model **out, char **warnings);
/* nqubits <= 0 selects the entry's default. */
QLOCAL_API qlocal_status qlocal_model_from_catalog(const char *name, int nqubits, qlocal_model **out);
QLOCAL_API void qlocal_model_free(qlocal_model *model);
QLOCAL_API int qlocal_model_nqubits(const qlocal_model *model);

QLOCAL_API qlocal_status qlocal_qfi(const qlocal_model *model, double lambda, double *out);

/* Full analysis on every grid point; one report per point. Per-point errors
 * are reported in the output and the status of the first one is returned. */
QLOCAL_API qlocal_status qlocal_sweep(const qlocal_model *model, const double *lambdas, size_t count,
                                      const qlocal_options *options, char **out);

/* Checks user axes ("x,z,x" or "1,0,0; 0,0,1; ...") on every grid point. */
QLOCAL_API qlocal_status qlocal_verify(const qlocal_model *model, const double *lambdas, size_t count,
                                       const char *axes, const qlocal_options *options, char **out);

/* LMCC tree at one point. order may be NULL (identity) or a permutation of 1..N. */
QLOCAL_API qlocal_status qlocal_lmcc(const qlocal_model *model, double lambda, const int *order, size_t order_len,
                                     char **out);

QLOCAL_API qlocal_status qlocal_catalog_list(char **out);

/* Analysis of a catalog model with its reference measurement checked at each
 * point. The counterexample has no reference; its points still run. */
QLOCAL_API qlocal_status qlocal_catalog_run(const char *name, int nqubits, const double *lambdas, size_t count,
                                            const qlocal_options *options, char **out);

/* Parses "start:stop:count" into a newly allocated array (free with qlocal_grid_free). */
QLOCAL_API qlocal_status qlocal_parse_grid(const char *text, double **out, size_t *count);
QLOCAL_API void qlocal_grid_free(double *grid);

#ifdef __cplusplus
}
#endif
