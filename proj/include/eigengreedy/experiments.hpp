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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eigengreedy/feature_store.hpp"
#include "eigengreedy/gaussian_model.hpp"
#include "eigengreedy/selection.hpp"

namespace eigengreedy {

enum class ExperimentKind { kExp1, kExp2, kExp3 };

std::string_view ToString(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view text);

// Greedy/eval partition of a test set. Both sides always carry every normal
// row; the anomalous rows are identical (exp1) or disjoint (exp2, exp3).
struct SplitSpec {
  std::vector<std::size_t> greedy_rows;  // ascending
  std::vector<std::size_t> eval_rows;    // ascending
  std::string descriptor;

  bool operator==(const SplitSpec&) const = default;
};

inline constexpr std::size_t kDefaultSeedCount = 5;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kExp1;
  std::string category;
  std::string node;
  std::size_t n_min = 0;             // exp3 only
  std::vector<std::uint64_t> seeds;  // exp3 only
  std::vector<Method> methods;
  CurveOptions curve_options;

  void Validate() const;
};

// Greedy and eval both use the whole test set.
SplitSpec SplitExp1(const FeatureSet& test);

// Greedy anomalies: one type. Eval anomalies: every other type.
SplitSpec SplitExp2(const FeatureSet& test, const std::string& anomaly_type);

// ceil(n_min / T) anomalies per type for greedy, drawn without replacement
// from a stream seeded by (seed, category, type); the rest go to eval.
SplitSpec SplitExp3(const FeatureSet& test, std::size_t n_min, std::uint64_t seed);

std::size_t CountAnomalous(const FeatureSet& test, std::span<const std::size_t> rows);

struct SplitRun {
  SplitSpec split;
  std::vector<CurveResult> curves;  // one per configured method, same order
};

struct ExperimentResult {
  ExperimentConfig config;
  std::size_t dim = 0;
  double shrinkage = 0.0;
  std::vector<SplitRun> runs;
};

// Fits one model on `train`, whitens `test` once and evaluates every
// configured method on every split of the protocol.
ExperimentResult RunExperiment(const FeatureSet& train, const FeatureSet& test,
                               const ExperimentConfig& config);

// Per-k mean of eval AUROC over curves of one method (e.g. exp3 seeds).
Curve MeanCurve(std::span<const Curve> curves);

// JSON config: {kind, category, node, n_min?, seeds?, master_seed?, range_lo?,
// methods, feature_store_paths: {train, test}}. Relative store paths resolve
// against the config file's directory.
struct ExperimentFile {
  ExperimentConfig config;
  std::filesystem::path train_store;
  std::filesystem::path test_store;
  bool explicit_seeds = false;  // config listed "seeds" itself
};

ExperimentFile LoadExperimentConfig(const std::filesystem::path& path);

// `<descriptor>__<method>.csv` per curve, `<descriptor>__<method>.trace.json`
// per greedy trace, and `index.json`.
void WriteExperimentOutputs(const ExperimentResult& result, const FeatureSet& test,
                            const std::filesystem::path& out_dir);

}  // namespace eigengreedy
