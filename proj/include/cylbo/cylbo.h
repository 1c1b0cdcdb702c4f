/*
 * Copyright 2026 The cylbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the cylbo optimizer. All handles are opaque; every call that
 * can fail returns a cylbo_status and leaves a message retrievable with
 * cylbo_last_error() on the calling thread. */

#ifndef CYLBO_H
#define CYLBO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CYLBO_BUILDING_LIBRARY)
#    define CYLBO_API __declspec(dllexport)
#  else
#    define CYLBO_API __declspec(dllimport)
#  endif
#else
#  define CYLBO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cylbo_status {
    CYLBO_OK = 0,
    CYLBO_ERR_INVALID_ARGUMENT = 1,
    CYLBO_ERR_DIMENSION = 2,
    CYLBO_ERR_DOMAIN = 3,
    CYLBO_ERR_FACTORIZATION = 4,
    CYLBO_ERR_UNKNOWN_ID = 5,
    CYLBO_ERR_CONFIG = 6,
    CYLBO_ERR_IO = 7,
    CYLBO_ERR_INTERNAL = 8
} cylbo_status;

typedef struct cylbo_config cylbo_config;
typedef struct cylbo_trace cylbo_trace;

typedef struct cylbo_record {
    int iteration;
    double y;
    double best_y;
    double fit_seconds;
    double acq_seconds;
    double eval_seconds;
    int posterior_samples;
    double mcmc_evals_per_update;
} cylbo_record;

typedef struct cylbo_run_options {
    const char* trace_path;   /* CSV, flushed after every record; may be NULL */
    const char* summary_path; /* JSON summary; may be NULL */
    int record_timing;        /* nonzero: wall-clock columns in the trace */
} cylbo_run_options;

CYLBO_API const char* cylbo_version(void);
CYLBO_API const char* cylbo_status_string(cylbo_status status);
CYLBO_API const char* cylbo_last_error(void);


CYLBO_API cylbo_status cylbo_config_create(cylbo_config** out);
CYLBO_API void cylbo_config_destroy(cylbo_config* config);
CYLBO_API cylbo_status cylbo_config_load_json(cylbo_config* config, const char* json_text);
CYLBO_API cylbo_status cylbo_config_set(cylbo_config* config, const char* key, const char* value);
/* Text results are copied into `buf` when they fit; `needed` (optional)
 * receives the size including the terminator. */
CYLBO_API cylbo_status cylbo_config_to_json(const cylbo_config* config, char* buf, size_t capacity,
                                            size_t* needed);
CYLBO_API cylbo_status cylbo_config_output(const cylbo_config* config, const char* key, char* buf,
                                           size_t capacity, size_t* needed);

/* Runs the optimization. On failure `*out` (when non-NULL) still receives the
 * partial trace and the trace file holds every completed record. */
CYLBO_API cylbo_status cylbo_run(const cylbo_config* config, const cylbo_run_options* options,
                                 cylbo_trace** out);
CYLBO_API size_t cylbo_trace_length(const cylbo_trace* trace);
CYLBO_API int cylbo_trace_dim(const cylbo_trace* trace);
CYLBO_API cylbo_status cylbo_trace_record(const cylbo_trace* trace, size_t index, cylbo_record* out);
CYLBO_API cylbo_status cylbo_trace_x(const cylbo_trace* trace, size_t index, double* x, size_t dim);
CYLBO_API void cylbo_trace_destroy(cylbo_trace* trace);

/* Evaluates a benchmark at a search-space point (cube [-1,1]^d scaled). */
CYLBO_API cylbo_status cylbo_benchmark_eval(const char* name, const double* x, size_t dim, double* out);

/* Reads summary files and writes a grouped mean +- std report into `report`.
 * When `plot_prefix` is non-NULL, writes <prefix><variant>.csv per variant. */
CYLBO_API cylbo_status cylbo_compare(const char* const* summary_paths, size_t count, const char* plot_prefix,
                                     char* report, size_t capacity, size_t* needed);

#define CYLBO_SELFTEST_CORRUPT_BENCHMARK 0x1u

typedef void (*cylbo_check_fn)(const char* name, int passed, const char* detail, void* user);

/* Runs the built-in checks, reporting each through `callback`. */
CYLBO_API cylbo_status cylbo_selftest(unsigned flags, cylbo_check_fn callback, void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
