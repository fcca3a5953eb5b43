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

// eigengreedy command-line tool. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigengreedy/eigengreedy.h"

namespace {

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using FeatureSetPtr = std::unique_ptr<eg_feature_set, Deleter<eg_feature_set, eg_feature_set_free>>;
using ModelPtr = std::unique_ptr<eg_model, Deleter<eg_model, eg_model_free>>;
using WhitePtr = std::unique_ptr<eg_white_set, Deleter<eg_white_set, eg_white_set_free>>;
using TracePtr = std::unique_ptr<eg_trace, Deleter<eg_trace, eg_trace_free>>;
using CurvePtr = std::unique_ptr<eg_curve, Deleter<eg_curve, eg_curve_free>>;
using SimulationPtr = std::unique_ptr<eg_simulation, Deleter<eg_simulation, eg_simulation_free>>;
using ExperimentPtr = std::unique_ptr<eg_experiment, Deleter<eg_experiment, eg_experiment_free>>;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(eg_status status, const std::string& context) {
  if (status != EG_OK) {
    throw CommandError(context + ": " + eg_status_name(status) + ": " + eg_last_error());
  }
}

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

FeatureSetPtr ReadStore(const std::string& stem) {
  eg_feature_set* raw = nullptr;
  Check(eg_feature_set_read(stem.c_str(), &raw), "reading " + stem);
  return FeatureSetPtr(raw);
}

ModelPtr LoadModel(const std::string& path) {
  eg_model* raw = nullptr;
  Check(eg_model_load(path.c_str(), &raw), "loading " + path);
  return ModelPtr(raw);
}

WhitePtr WhitenStore(const eg_model* model, const eg_feature_set* set, const std::string& what) {
  eg_white_set* raw = nullptr;
  Check(eg_white_set_create(model, set, &raw), "whitening " + what);
  return WhitePtr(raw);
}

eg_method ParseMethod(const std::string& name) {
  if (name == "bottom_up") return EG_METHOD_BOTTOM_UP;
  if (name == "top_down") return EG_METHOD_TOP_DOWN;
  if (name == "pca") return EG_METHOD_PCA;
  if (name == "npca") return EG_METHOD_NPCA;
  if (name == "range") return EG_METHOD_RANGE;
  throw CommandError("unknown method \"" + name + "\"");
}

// Parses "features.N"; -1 for anything else.
int NodeDepth(const std::string& node) {
  const std::string prefix = "features.";
  if (node.rfind(prefix, 0) != 0 || node.size() == prefix.size()) return -1;
  int depth = 0;
  for (char c : node.substr(prefix.size())) {
    if (c < '0' || c > '9') return -1;
    depth = depth * 10 + (c - '0');
  }
  return depth;
}

constexpr int kShallowestReportedNode = 5;

struct FitArgs {
  std::string train;
  std::string out;
};

int RunFit(const FitArgs& a) {
  auto all = ReadStore(a.train);
  eg_feature_set* raw = nullptr;
  Check(eg_feature_set_filter_split(all.get(), EG_SPLIT_TRAIN, &raw), "selecting train rows of " + a.train);
  FeatureSetPtr train(raw);

  eg_model* model_raw = nullptr;
  Check(eg_model_fit(train.get(), &model_raw), "fitting");
  ModelPtr model(model_raw);
  Check(eg_model_save(model.get(), a.out.c_str()), "writing " + a.out);

  eg_model_summary s{};
  Check(eg_model_summarize(model.get(), &s), "summarizing");
  std::cout << "{\"d\":" << s.dim << ",\"n\":" << eg_feature_set_rows(train.get())
            << ",\"shrinkage\":" << Num(s.shrinkage) << ",\"min_eigenvalue\":" << Num(s.min_eigenvalue)
            << ",\"max_eigenvalue\":" << Num(s.max_eigenvalue) << "}\n";
  return 0;
}

struct CurveArgs {
  std::string model;
  std::string greedy;
  std::string eval;
  std::string method = "bottom_up";
  std::size_t range_lo = 0;
  std::string out;
  std::string trace_out;
  std::string json_out;
};

int RunCurve(const CurveArgs& a) {
  const auto method = ParseMethod(a.method);
  const bool greedy_method = method == EG_METHOD_BOTTOM_UP || method == EG_METHOD_TOP_DOWN;
  if (!a.trace_out.empty() && !greedy_method) throw CommandError("--trace-out needs a greedy method");
  auto model = LoadModel(a.model);
  auto greedy_store = ReadStore(a.greedy);
  auto greedy = WhitenStore(model.get(), greedy_store.get(), a.greedy);
  WhitePtr eval;
  if (!a.eval.empty()) {
    auto eval_store = ReadStore(a.eval);
    eval = WhitenStore(model.get(), eval_store.get(), a.eval);
  }

  eg_curve* curve_raw = nullptr;
  eg_trace* trace_raw = nullptr;
  Check(eg_curve_compute(greedy.get(), eval ? eval.get() : greedy.get(), method, a.range_lo,
                         &curve_raw, &trace_raw),
        "computing curve");
  CurvePtr curve(curve_raw);
  TracePtr trace(trace_raw);

  Check(eg_curve_write_csv(curve.get(), a.out.c_str()), "writing " + a.out);
  if (!a.json_out.empty()) Check(eg_curve_write_json(curve.get(), a.json_out.c_str()), "writing " + a.json_out);
  if (!a.trace_out.empty()) {
    Check(eg_trace_write_json(trace.get(), a.trace_out.c_str()), "writing " + a.trace_out);
  }
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool all_nodes = false;
};

int RunExperiment(const ExperimentArgs& a) {
  eg_experiment* raw = nullptr;
  Check(eg_experiment_load(a.config.c_str(), &raw), "loading " + a.config);
  ExperimentPtr experiment(raw);

  const auto kind = eg_experiment_get_kind(experiment.get());
  const std::string node = eg_experiment_get_node(experiment.get());
  const int depth = NodeDepth(node);
  if (kind != EG_EXP1 && !a.all_nodes && depth >= 0 && depth < kShallowestReportedNode) {
    throw CommandError("node " + node + " is skipped for exp2/exp3 by default (features." +
                       std::to_string(kShallowestReportedNode) + " and deeper); pass --all-nodes to run it");
  }
  if (a.seed_given) Check(eg_experiment_set_master_seed(experiment.get(), a.seed), "setting seed");
  Check(eg_experiment_run(experiment.get(), a.out_dir.c_str()), "running experiment");
  return 0;
}

struct AnalyzeArgs {
  std::string curves;
  double tolerance = 0.005;
  std::string out_dir;
};

int RunAnalyze(const AnalyzeArgs& a) {
  const auto out = a.out_dir.empty() ? a.curves : a.out_dir;
  Check(eg_analyze_curves(a.curves.c_str(), a.tolerance, out.c_str()), "analyzing " + a.curves);
  return 0;
}

struct SimulateArgs {
  std::string model;
  std::string trace;
  std::string test;
  std::string signal;
  std::size_t k_prime = 1;
  std::size_t seeds = 30;
  std::uint64_t master_seed = 0;
  std::string out;
};

int RunSimulate(const SimulateArgs& a) {
  auto model = LoadModel(a.model);
  eg_trace* trace_raw = nullptr;
  Check(eg_trace_read_json(a.trace.c_str(), &trace_raw), "reading " + a.trace);
  TracePtr trace(trace_raw);
  auto test_store = ReadStore(a.test);
  auto test = WhitenStore(model.get(), test_store.get(), a.test);

  const auto signal = a.signal == "redundant" ? EG_SIGNAL_REDUNDANT : EG_SIGNAL_NOISE;
  eg_simulation* sim_raw = nullptr;
  Check(eg_simulate(model.get(), trace.get(), test.get(), a.k_prime, signal, a.seeds, a.master_seed, &sim_raw),
        "simulating");
  SimulationPtr sim(sim_raw);

  if (!a.out.empty()) {
    Check(eg_simulation_write_csv(sim.get(), a.out.c_str()), "writing " + a.out);
    return 0;
  }
  std::size_t length = 0;
  Check(eg_simulation_csv(sim.get(), nullptr, 0, &length), "formatting");
  std::vector<char> buffer(length + 1);
  Check(eg_simulation_csv(sim.get(), buffer.data(), buffer.size(), &length), "formatting");
  std::cout << buffer.data();
  return 0;
}

std::string JsonString(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
      out += buf;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

int RunValidate(const std::string& store) {
  eg_store_report r{};
  Check(eg_store_validate(store.c_str(), &r), "validating " + store);
  std::cout << "{\"store\":" << JsonString(store) << ",\"valid\":true,\"n\":" << r.rows << ",\"d\":" << r.dim
            << ",\"train\":" << r.train_rows << ",\"test_normal\":" << r.test_normal_rows
            << ",\"test_anomalous\":" << r.test_anomalous_rows << ",\"anomaly_types\":" << r.anomaly_types
            << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian anomaly detection with greedy eigencomponent selection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", eg_version());

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the shrunk Gaussian model on a train feature store");
  fit_cmd->add_option("--train", fit.train, "Feature store stem (<stem>.fvs + <stem>.json)")->required();
  fit_cmd->add_option("--out", fit.out, "Model output path")->required();

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "k-vs-AUROC curve for one selection method");
  curve_cmd->add_option("--model", curve.model, "Fitted model")->required();
  curve_cmd->add_option("--greedy", curve.greedy, "Feature store driving the greedy search")->required();
  curve_cmd->add_option("--eval", curve.eval, "Feature store for evaluation (default: the greedy store)");
  curve_cmd->add_option("--method", curve.method, "bottom_up, top_down, pca, npca or range")
      ->check(CLI::IsMember({"bottom_up", "top_down", "pca", "npca", "range"}));
  curve_cmd->add_option("--range-lo", curve.range_lo, "First component of the range window");
  curve_cmd->add_option("--out", curve.out, "Curve CSV output")->required();
  curve_cmd->add_option("--trace-out", curve.trace_out, "Selection trace JSON output (greedy methods)");
  curve_cmd->add_option("--json-out", curve.json_out, "Curve JSON output");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment protocol from a JSON config");
  exp_cmd->add_option("--config", exp.config, "Experiment config JSON")->required();
  exp_cmd->add_option("--out-dir", exp.out_dir, "Output directory")->required();
  auto* seed_opt = exp_cmd->add_option("--seed", exp.seed, "Master seed for exp3 splits when the config lists none");
  exp_cmd->add_flag("--all-nodes", exp.all_nodes, "Also run exp2/exp3 on nodes shallower than features.5");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Regimes and minimal k at max AUROC for curve CSVs");
  analyze_cmd->add_option("--curves", analyze.curves, "Directory of curve CSVs")->required();
  analyze_cmd->add_option("--tolerance", analyze.tolerance, "Plateau tolerance in AUROC")
      ->check(CLI::NonNegativeNumber);
  analyze_cmd->add_option("--out-dir", analyze.out_dir, "Output directory (default: --curves)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Replace trailing components by noise or redundant axes");
  sim_cmd->add_option("--model", sim.model, "Fitted model")->required();
  sim_cmd->add_option("--trace", sim.trace, "Complete bottom-up trace JSON")->required();
  sim_cmd->add_option("--test", sim.test, "Test feature store")->required();
  sim_cmd->add_option("--signal", sim.signal, "noise or redundant")
      ->required()
      ->check(CLI::IsMember({"noise", "redundant"}));
  sim_cmd->add_option("--k-prime", sim.k_prime, "First replaced trace position (1-based)")->required();
  sim_cmd->add_option("--seeds", sim.seeds, "Number of random seeds")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.master_seed, "Master seed");
  sim_cmd->add_option("--out", sim.out, "CSV output (default: stdout)");

  std::string validate_store;
  auto* validate_cmd = app.add_subcommand("validate", "Check a feature store against the file format");
  validate_cmd->add_option("--store", validate_store, "Feature store stem")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit_cmd) return RunFit(fit);
    if (*curve_cmd) return RunCurve(curve);
    if (*exp_cmd) {
      exp.seed_given = seed_opt->count() > 0;
      return RunExperiment(exp);
    }
    if (*analyze_cmd) return RunAnalyze(analyze);
    if (*sim_cmd) return RunSimulate(sim);
    if (*validate_cmd) return RunValidate(validate_store);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
