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

#include "eigengreedy/eigengreedy.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "eigengreedy/analysis.hpp"
#include "eigengreedy/error.hpp"
#include "eigengreedy/experiments.hpp"
#include "eigengreedy/feature_store.hpp"
#include "eigengreedy/gaussian_model.hpp"
#include "eigengreedy/parallel.hpp"
#include "eigengreedy/records.hpp"
#include "eigengreedy/selection.hpp"
#include "binary_io.hpp"

namespace eg = eigengreedy;

struct eg_feature_set {
  eg::FeatureSet value;
};
struct eg_model {
  eg::GaussianModel value;
};
struct eg_white_set {
  eg::WhiteSet value;
};
struct eg_trace {
  eg::SelectionTrace value;
};
struct eg_curve {
  eg::Curve value;
};
struct eg_simulation {
  eg::SimulationResult value;
};
struct eg_experiment {
  eg::ExperimentFile value;
};

namespace {

thread_local std::string g_last_error;

eg_status Record(eg_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

eg_status FromCode(eg::ErrorCode code) {
  switch (code) {
    case eg::ErrorCode::kInvalidArgument: return EG_ERR_INVALID_ARGUMENT;
    case eg::ErrorCode::kIo: return EG_ERR_IO;
    case eg::ErrorCode::kFormat: return EG_ERR_FORMAT;
    case eg::ErrorCode::kDegenerate: return EG_ERR_DEGENERATE;
    case eg::ErrorCode::kDimensionMismatch: return EG_ERR_DIMENSION;
    case eg::ErrorCode::kEmptyResult: return EG_ERR_EMPTY;
  }
  return EG_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
eg_status Guard(Body&& body) {
  try {
    body();
    return EG_OK;
  } catch (const eg::Error& e) {
    return Record(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(EG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Record(EG_ERR_INTERNAL, e.what());
  } catch (...) {
    return Record(EG_ERR_INTERNAL, "unknown error");
  }
}

template <typename... Ptrs>
bool AnyNull(const Ptrs*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

eg_status NullArgument() { return Record(EG_ERR_INVALID_ARGUMENT, "null argument"); }

eg::Method ToMethod(eg_method m) {
  switch (m) {
    case EG_METHOD_BOTTOM_UP: return eg::Method::kBottomUp;
    case EG_METHOD_TOP_DOWN: return eg::Method::kTopDown;
    case EG_METHOD_PCA: return eg::Method::kPca;
    case EG_METHOD_NPCA: return eg::Method::kNpca;
    case EG_METHOD_RANGE: return eg::Method::kRange;
  }
  eg::Fail(eg::ErrorCode::kInvalidArgument, "unknown method code");
}

}  // namespace

extern "C" {

const char* eg_last_error(void) { return g_last_error.c_str(); }

const char* eg_status_name(eg_status status) {
  switch (status) {
    case EG_OK: return "ok";
    case EG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EG_ERR_IO: return "i/o error";
    case EG_ERR_FORMAT: return "format error";
    case EG_ERR_DEGENERATE: return "degenerate data";
    case EG_ERR_DIMENSION: return "dimension mismatch";
    case EG_ERR_EMPTY: return "empty result";
    case EG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* eg_version(void) { return "1.0.0"; }

void eg_set_max_threads(size_t threads) { eg::SetWorkerCount(threads); }

eg_status eg_feature_set_read(const char* stem, eg_feature_set** out) {
  if (AnyNull(stem, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_feature_set{eg::ReadFeatureSet(stem)}; });
}

eg_status eg_feature_set_write(const eg_feature_set* set, const char* stem) {
  if (AnyNull(set, stem)) return NullArgument();
  return Guard([&] { eg::WriteFeatureSet(set->value, stem); });
}

eg_status eg_feature_set_filter_split(const eg_feature_set* set, eg_split split, eg_feature_set** out) {
  if (AnyNull(set, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] {
    const auto s = split == EG_SPLIT_TRAIN ? eg::Split::kTrain : eg::Split::kTest;
    *out = new eg_feature_set{eg::FilterSamples(set->value, eg::SplitIs(s))};
  });
}

size_t eg_feature_set_rows(const eg_feature_set* set) { return set ? set->value.rows() : 0; }
size_t eg_feature_set_dim(const eg_feature_set* set) { return set ? set->value.dim() : 0; }
void eg_feature_set_free(eg_feature_set* set) { delete set; }

eg_status eg_store_validate(const char* stem, eg_store_report* report) {
  if (AnyNull(stem, report)) return NullArgument();
  return Guard([&] {
    const auto r = eg::ValidateStore(stem);
    *report = {r.rows, r.dim, r.train_rows, r.test_normal_rows, r.test_anomalous_rows, r.anomaly_types.size()};
  });
}

eg_status eg_model_fit(const eg_feature_set* train, eg_model** out) {
  if (AnyNull(train, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_model{eg::GaussianModel::Fit(train->value)}; });
}

eg_status eg_model_save(const eg_model* model, const char* path) {
  if (AnyNull(model, path)) return NullArgument();
  return Guard([&] { model->value.Save(path); });
}

eg_status eg_model_load(const char* path, eg_model** out) {
  if (AnyNull(path, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_model{eg::GaussianModel::Load(path)}; });
}

eg_status eg_model_summarize(const eg_model* model, eg_model_summary* summary) {
  if (AnyNull(model, summary)) return NullArgument();
  const auto& m = model->value;
  *summary = {m.dim(), m.shrinkage(), m.eigenvalues().minCoeff(), m.eigenvalues().maxCoeff()};
  return EG_OK;
}

eg_status eg_model_mahalanobis(const eg_model* model, const double* x, size_t len, double* distance) {
  if (AnyNull(model, x, distance)) return NullArgument();
  return Guard([&] { *distance = model->value.Mahalanobis({x, len}); });
}

void eg_model_free(eg_model* model) { delete model; }

eg_status eg_white_set_create(const eg_model* model, const eg_feature_set* set, eg_white_set** out) {
  if (AnyNull(model, set, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_white_set{eg::Whiten(model->value, set->value)}; });
}

size_t eg_white_set_rows(const eg_white_set* white) { return white ? white->value.rows() : 0; }
void eg_white_set_free(eg_white_set* white) { delete white; }

eg_status eg_curve_compute(const eg_white_set* greedy, const eg_white_set* eval, eg_method method,
                           size_t range_lo, eg_curve** curve_out, eg_trace** trace_out) {
  if (AnyNull(greedy, eval, curve_out)) return NullArgument();
  *curve_out = nullptr;
  if (trace_out) *trace_out = nullptr;
  return Guard([&] {
    auto result = eg::ComputeCurve(greedy->value, eval->value, ToMethod(method), {range_lo});
    auto curve = std::make_unique<eg_curve>(eg_curve{std::move(result.curve)});
    if (trace_out && result.trace) *trace_out = new eg_trace{std::move(*result.trace)};
    *curve_out = curve.release();
  });
}

size_t eg_curve_length(const eg_curve* curve) { return curve ? curve->value.dim() : 0; }

eg_status eg_curve_auroc(const eg_curve* curve, size_t k, double* auroc) {
  if (AnyNull(curve, auroc)) return NullArgument();
  if (k < 1 || k > curve->value.dim()) return Record(EG_ERR_INVALID_ARGUMENT, "k out of range");
  *auroc = curve->value.auroc_values[k - 1];
  return EG_OK;
}

eg_status eg_curve_write_csv(const eg_curve* curve, const char* path) {
  if (AnyNull(curve, path)) return NullArgument();
  return Guard([&] { eg::WriteCurveCsv(curve->value, path); });
}

eg_status eg_curve_write_json(const eg_curve* curve, const char* path) {
  if (AnyNull(curve, path)) return NullArgument();
  return Guard([&] { eg::detail::WriteText(path, eg::DumpJson(eg::CurveToJson(curve->value))); });
}

void eg_curve_free(eg_curve* curve) { delete curve; }

eg_status eg_trace_read_json(const char* path, eg_trace** out) {
  if (AnyNull(path, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_trace{eg::ReadTraceJson(path)}; });
}

eg_status eg_trace_write_json(const eg_trace* trace, const char* path) {
  if (AnyNull(trace, path)) return NullArgument();
  return Guard([&] { eg::WriteTraceJson(trace->value, path); });
}

size_t eg_trace_length(const eg_trace* trace) { return trace ? trace->value.steps.size() : 0; }
void eg_trace_free(eg_trace* trace) { delete trace; }

eg_status eg_experiment_load(const char* config_path, eg_experiment** out) {
  if (AnyNull(config_path, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] { *out = new eg_experiment{eg::LoadExperimentConfig(config_path)}; });
}

eg_experiment_kind eg_experiment_get_kind(const eg_experiment* experiment) {
  switch (experiment->value.config.kind) {
    case eg::ExperimentKind::kExp1: return EG_EXP1;
    case eg::ExperimentKind::kExp2: return EG_EXP2;
    case eg::ExperimentKind::kExp3: return EG_EXP3;
  }
  return EG_EXP1;
}

const char* eg_experiment_get_node(const eg_experiment* experiment) {
  return experiment ? experiment->value.config.node.c_str() : "";
}

eg_status eg_experiment_set_master_seed(eg_experiment* experiment, uint64_t seed) {
  if (AnyNull(experiment)) return NullArgument();
  auto& file = experiment->value;
  if (file.config.kind != eg::ExperimentKind::kExp3 || file.explicit_seeds) return EG_OK;
  file.config.seeds.clear();
  for (std::size_t i = 0; i < eg::kDefaultSeedCount; ++i) file.config.seeds.push_back(seed + i);
  return EG_OK;
}

eg_status eg_experiment_run(const eg_experiment* experiment, const char* out_dir) {
  if (AnyNull(experiment, out_dir)) return NullArgument();
  return Guard([&] {
    const auto& file = experiment->value;
    const auto train = eg::ReadFeatureSet(file.train_store);
    const auto test = eg::ReadFeatureSet(file.test_store);
    const auto result = eg::RunExperiment(train, test, file.config);
    eg::WriteExperimentOutputs(result, test, out_dir);
  });
}

void eg_experiment_free(eg_experiment* experiment) { delete experiment; }

eg_status eg_analyze_curves(const char* curves_dir, double tolerance, const char* out_dir) {
  if (AnyNull(curves_dir, out_dir)) return NullArgument();
  return Guard([&] { eg::AnalyzeCurveDirectory(curves_dir, tolerance, out_dir); });
}

eg_status eg_simulate(const eg_model* model, const eg_trace* trace, const eg_white_set* test_white,
                      size_t k_prime, eg_signal signal, size_t n_seeds, uint64_t master_seed,
                      eg_simulation** out) {
  if (AnyNull(model, trace, test_white, out)) return NullArgument();
  *out = nullptr;
  return Guard([&] {
    const auto s = signal == EG_SIGNAL_REDUNDANT ? eg::Signal::kRedundant : eg::Signal::kNoise;
    *out = new eg_simulation{eg::SimulateReplacement(model->value, trace->value, test_white->value, k_prime, s,
                                                     n_seeds, master_seed)};
  });
}

eg_status eg_simulation_write_csv(const eg_simulation* simulation, const char* path) {
  if (AnyNull(simulation, path)) return NullArgument();
  return Guard([&] { eg::detail::WriteText(path, eg::SimulationToCsv(simulation->value)); });
}

eg_status eg_simulation_csv(const eg_simulation* simulation, char* buffer, size_t capacity,
                            size_t* length) {
  if (AnyNull(simulation, length)) return NullArgument();
  return Guard([&] {
    const auto text = eg::SimulationToCsv(simulation->value);
    *length = text.size();
    if (buffer && capacity > text.size()) {
      text.copy(buffer, text.size());
      buffer[text.size()] = '\0';
    }
  });
}

void eg_simulation_free(eg_simulation* simulation) { delete simulation; }

}  // extern "C"
