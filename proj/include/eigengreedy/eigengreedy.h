// Copyright 2026 The EigenGreedy Authors.
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

#ifndef EIGENGREEDY_EIGENGREEDY_H_
#define EIGENGREEDY_EIGENGREEDY_H_

/*
 * C interface to the eigengreedy library: Gaussian anomaly scoring on
 * whitened features with greedy eigencomponent selection.
 *
 * Objects are opaque handles released with the matching *_free function
 * (passing NULL is allowed). Every fallible call returns an eg_status; on
 * failure eg_last_error() describes the problem for the calling thread
 * until its next failing call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EIGENGREEDY_BUILDING)
#    define EG_API __declspec(dllexport)
#  else
#    define EG_API __declspec(dllimport)
#  endif
#else
#  define EG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eg_status {
  EG_OK = 0,
  EG_ERR_INVALID_ARGUMENT = 1,
  EG_ERR_IO = 2,
  EG_ERR_FORMAT = 3,
  EG_ERR_DEGENERATE = 4,
  EG_ERR_DIMENSION = 5,
  EG_ERR_EMPTY = 6,
  EG_ERR_INTERNAL = 99
} eg_status;

typedef enum eg_split { EG_SPLIT_TRAIN = 0, EG_SPLIT_TEST = 1 } eg_split;

typedef enum eg_method {
  EG_METHOD_BOTTOM_UP = 0,
  EG_METHOD_TOP_DOWN = 1,
  EG_METHOD_PCA = 2,
  EG_METHOD_NPCA = 3,
  EG_METHOD_RANGE = 4
} eg_method;

typedef enum eg_signal { EG_SIGNAL_NOISE = 0, EG_SIGNAL_REDUNDANT = 1 } eg_signal;

typedef enum eg_experiment_kind { EG_EXP1 = 1, EG_EXP2 = 2, EG_EXP3 = 3 } eg_experiment_kind;

typedef struct eg_feature_set eg_feature_set;
typedef struct eg_model eg_model;
typedef struct eg_white_set eg_white_set;
typedef struct eg_trace eg_trace;
typedef struct eg_curve eg_curve;
typedef struct eg_simulation eg_simulation;
typedef struct eg_experiment eg_experiment;

typedef struct eg_store_report {
  size_t rows;
  size_t dim;
  size_t train_rows;
  size_t test_normal_rows;
  size_t test_anomalous_rows;
  size_t anomaly_types;
} eg_store_report;

typedef struct eg_model_summary {
  size_t dim;
  double shrinkage;
  double min_eigenvalue;
  double max_eigenvalue;
} eg_model_summary;

EG_API const char* eg_last_error(void);
EG_API const char* eg_status_name(eg_status status);
EG_API const char* eg_version(void);

/* Worker cap for internal parallelism; 0 restores the default, which is
 * EIGENGREEDY_THREADS or the hardware concurrency. */
EG_API void eg_set_max_threads(size_t threads);

/* Feature stores: `stem` names the pair <stem>.fvs + <stem>.json. */
EG_API eg_status eg_feature_set_read(const char* stem, eg_feature_set** out);
EG_API eg_status eg_feature_set_write(const eg_feature_set* set, const char* stem);
EG_API eg_status eg_feature_set_filter_split(const eg_feature_set* set, eg_split split,
                                             eg_feature_set** out);
EG_API size_t eg_feature_set_rows(const eg_feature_set* set);
EG_API size_t eg_feature_set_dim(const eg_feature_set* set);
EG_API void eg_feature_set_free(eg_feature_set* set);
EG_API eg_status eg_store_validate(const char* stem, eg_store_report* report);

/* Gaussian model. */
EG_API eg_status eg_model_fit(const eg_feature_set* train, eg_model** out);
EG_API eg_status eg_model_save(const eg_model* model, const char* path);
EG_API eg_status eg_model_load(const char* path, eg_model** out);
EG_API eg_status eg_model_summarize(const eg_model* model, eg_model_summary* summary);
EG_API eg_status eg_model_mahalanobis(const eg_model* model, const double* x, size_t len,
                                      double* distance);
EG_API void eg_model_free(eg_model* model);

/* White vectors of every row of `set` (labels carried over). */
EG_API eg_status eg_white_set_create(const eg_model* model, const eg_feature_set* set,
                                     eg_white_set** out);
EG_API size_t eg_white_set_rows(const eg_white_set* white);
EG_API void eg_white_set_free(eg_white_set* white);

/* k-vs-AUROC curve for k = 1..d; `trace_out` may be NULL and stays NULL for
 * non-greedy methods. `range_lo` only affects EG_METHOD_RANGE. */
EG_API eg_status eg_curve_compute(const eg_white_set* greedy, const eg_white_set* eval,
                                  eg_method method, size_t range_lo, eg_curve** curve_out,
                                  eg_trace** trace_out);
EG_API size_t eg_curve_length(const eg_curve* curve);
EG_API eg_status eg_curve_auroc(const eg_curve* curve, size_t k, double* auroc);
EG_API eg_status eg_curve_write_csv(const eg_curve* curve, const char* path);
EG_API eg_status eg_curve_write_json(const eg_curve* curve, const char* path);
EG_API void eg_curve_free(eg_curve* curve);

EG_API eg_status eg_trace_read_json(const char* path, eg_trace** out);
EG_API eg_status eg_trace_write_json(const eg_trace* trace, const char* path);
EG_API size_t eg_trace_length(const eg_trace* trace);
EG_API void eg_trace_free(eg_trace* trace);

/* Experiments driven by a JSON config file. */
EG_API eg_status eg_experiment_load(const char* config_path, eg_experiment** out);
EG_API eg_experiment_kind eg_experiment_get_kind(const eg_experiment* experiment);
EG_API const char* eg_experiment_get_node(const eg_experiment* experiment);
/* Overrides seeds derived from master_seed when the config lists none. */
EG_API eg_status eg_experiment_set_master_seed(eg_experiment* experiment, uint64_t seed);
EG_API eg_status eg_experiment_run(const eg_experiment* experiment, const char* out_dir);
EG_API void eg_experiment_free(eg_experiment* experiment);

/* Writes regimes.csv and k_at_max.csv for every curve CSV in `curves_dir`. */
EG_API eg_status eg_analyze_curves(const char* curves_dir, double tolerance, const char* out_dir);

EG_API eg_status eg_simulate(const eg_model* model, const eg_trace* trace,
                             const eg_white_set* test_white, size_t k_prime, eg_signal signal,
                             size_t n_seeds, uint64_t master_seed, eg_simulation** out);
EG_API eg_status eg_simulation_write_csv(const eg_simulation* simulation, const char* path);
/* Copies the CSV text (NUL-terminated) into `buffer` when it fits;
 * `*length` always receives the text length without the terminator. */
EG_API eg_status eg_simulation_csv(const eg_simulation* simulation, char* buffer, size_t capacity,
                                   size_t* length);
EG_API void eg_simulation_free(eg_simulation* simulation);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // EIGENGREEDY_EIGENGREEDY_H_
