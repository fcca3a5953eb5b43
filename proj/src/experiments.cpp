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

#include "eigengreedy/experiments.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "eigengreedy/error.hpp"
#include "eigengreedy/random.hpp"
#include "eigengreedy/records.hpp"

namespace eigengreedy {

using nlohmann::ordered_json;

namespace {

struct TestRows {
  std::vector<std::size_t> normal;
  std::map<std::string, std::vector<std::size_t>> anomalous_by_type;  // sorted by type
  std::size_t anomalous_total = 0;
};

TestRows GroupRows(const FeatureSet& test) {
  TestRows g;
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    const auto& s = test.samples[i];
    if (s.label == Label::kNormal) {
      g.normal.push_back(i);
    } else {
      g.anomalous_by_type[s.anomaly_type].push_back(i);
      ++g.anomalous_total;
    }
  }
  if (g.normal.empty() || g.anomalous_total == 0) {
    Fail(ErrorCode::kInvalidArgument, "test set needs both normal and anomalous rows");
  }
  return g;
}

std::vector<std::size_t> Merge(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

std::string FileSafe(std::string s) {
  for (auto& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

}  // namespace

std::string_view ToString(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kExp1: return "exp1";
    case ExperimentKind::kExp2: return "exp2";
    case ExperimentKind::kExp3: return "exp3";
  }
  return "unknown";
}

ExperimentKind ParseExperimentKind(std::string_view text) {
  for (auto k : {ExperimentKind::kExp1, ExperimentKind::kExp2, ExperimentKind::kExp3})
    if (ToString(k) == text) return k;
  Fail(ErrorCode::kInvalidArgument, "unknown experiment kind \"" + std::string(text) + "\"");
}

void ExperimentConfig::Validate() const {
  if (methods.empty()) Fail(ErrorCode::kInvalidArgument, "experiment needs at least one method");
  if (kind == ExperimentKind::kExp3) {
    if (n_min < 1) Fail(ErrorCode::kInvalidArgument, "exp3 needs n_min >= 1");
    if (seeds.empty()) Fail(ErrorCode::kInvalidArgument, "exp3 needs at least one seed");
  }
}

SplitSpec SplitExp1(const FeatureSet& test) {
  GroupRows(test);
  SplitSpec split;
  for (std::size_t i = 0; i < test.rows(); ++i) split.greedy_rows.push_back(i);
  split.eval_rows = split.greedy_rows;
  split.descriptor = "exp1";
  return split;
}

SplitSpec SplitExp2(const FeatureSet& test, const std::string& anomaly_type) {
  const auto g = GroupRows(test);
  if (g.anomalous_by_type.size() < 2) {
    Fail(ErrorCode::kInvalidArgument, "category \"" + test.category +
                                          "\" only has one anomaly type; exp2 needs at least two");
  }
  const auto it = g.anomalous_by_type.find(anomaly_type);
  if (it == g.anomalous_by_type.end()) {
    Fail(ErrorCode::kInvalidArgument, "unknown anomaly type \"" + anomaly_type + "\"");
  }
  std::vector<std::size_t> others;
  for (const auto& [type, rows] : g.anomalous_by_type)
    if (type != anomaly_type) others.insert(others.end(), rows.begin(), rows.end());

  SplitSpec split;
  split.greedy_rows = Merge(g.normal, it->second);
  split.eval_rows = Merge(g.normal, others);
  split.descriptor = "exp2_" + anomaly_type;
  return split;
}

SplitSpec SplitExp3(const FeatureSet& test, std::size_t n_min, std::uint64_t seed) {
  const auto g = GroupRows(test);
  if (n_min < 1) Fail(ErrorCode::kInvalidArgument, "n_min must be >= 1");
  if (n_min > g.anomalous_total) {
    Fail(ErrorCode::kInvalidArgument, "n_min=" + std::to_string(n_min) + " exceeds the " +
                                          std::to_string(g.anomalous_total) + " anomalous rows");
  }
  const std::size_t types = g.anomalous_by_type.size();
  const std::size_t per_type = (n_min + types - 1) / types;

  std::vector<std::size_t> greedy;
  std::vector<std::size_t> rest;
  for (const auto& [type, rows] : g.anomalous_by_type) {
    if (rows.size() < per_type) {
      Fail(ErrorCode::kInvalidArgument, "anomaly type \"" + type + "\" has " + std::to_string(rows.size()) +
                                            " rows, fewer than the " + std::to_string(per_type) +
                                            " required per type");
    }
    Rng rng(DeriveSeed(seed, {test.category, type}));
    auto pool = rows;
    for (std::size_t i = 0; i < per_type; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.Below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    greedy.insert(greedy.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(per_type));
    rest.insert(rest.end(), pool.begin() + static_cast<std::ptrdiff_t>(per_type), pool.end());
  }

  SplitSpec split;
  split.greedy_rows = Merge(g.normal, greedy);
  split.eval_rows = Merge(g.normal, rest);
  split.descriptor = "exp3_seed" + std::to_string(seed);
  return split;
}

std::size_t CountAnomalous(const FeatureSet& test, std::span<const std::size_t> rows) {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](std::size_t r) {
    return test.samples.at(r).label == Label::kAnomalous;
  }));
}

ExperimentResult RunExperiment(const FeatureSet& train, const FeatureSet& test,
                               const ExperimentConfig& config) {
  config.Validate();
  for (const auto& s : train.samples) {
    if (s.label != Label::kNormal) Fail(ErrorCode::kInvalidArgument, "training set must be all normal");
  }
  if (train.dim() != test.dim()) Fail(ErrorCode::kDimensionMismatch, "train and test dimensions differ");

  std::vector<SplitSpec> splits;
  switch (config.kind) {
    case ExperimentKind::kExp1:
      splits.push_back(SplitExp1(test));
      break;
    case ExperimentKind::kExp2:
      for (const auto& type : AnomalyTypes(test)) splits.push_back(SplitExp2(test, type));
      if (splits.empty()) SplitExp1(test);  // surfaces the single-class error
      break;
    case ExperimentKind::kExp3:
      for (auto seed : config.seeds) splits.push_back(SplitExp3(test, config.n_min, seed));
      break;
  }

  const auto model = GaussianModel::Fit(train);
  const auto white = Whiten(model, test);

  ExperimentResult result;
  result.config = config;
  result.dim = model.dim();
  result.shrinkage = model.shrinkage();
  for (auto& split : splits) {
    SplitRun run;
    const auto greedy = white.SelectRows(split.greedy_rows);
    const auto eval = white.SelectRows(split.eval_rows);
    for (auto method : config.methods) run.curves.push_back(ComputeCurve(greedy, eval, method, config.curve_options));
    run.split = std::move(split);
    result.runs.push_back(std::move(run));
  }
  return result;
}

Curve MeanCurve(std::span<const Curve> curves) {
  if (curves.empty()) Fail(ErrorCode::kInvalidArgument, "no curves to average");
  Curve mean;
  mean.method = curves.front().method;
  mean.k_values = curves.front().k_values;
  mean.auroc_values.assign(mean.k_values.size(), 0.0);
  mean.changed_components.assign(mean.k_values.size(), std::nullopt);
  for (const auto& c : curves) {
    if (c.k_values != mean.k_values) Fail(ErrorCode::kDimensionMismatch, "curves differ in length");
    for (std::size_t i = 0; i < c.auroc_values.size(); ++i) mean.auroc_values[i] += c.auroc_values[i];
  }
  for (auto& v : mean.auroc_values) v /= static_cast<double>(curves.size());
  return mean;
}

ExperimentFile LoadExperimentConfig(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(detail::ReadText(path.string()));
  } catch (const ordered_json::parse_error& e) {
    Fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  ExperimentFile file;
  auto& c = file.config;
  try {
    c.kind = ParseExperimentKind(j.at("kind").get<std::string>());
    c.category = j.at("category").get<std::string>();
    c.node = j.at("node").get<std::string>();
    for (const auto& m : j.at("methods")) c.methods.push_back(ParseMethod(m.get<std::string>()));
    if (j.contains("n_min")) c.n_min = j["n_min"].get<std::size_t>();
    if (j.contains("range_lo")) c.curve_options.range_lo = j["range_lo"].get<std::size_t>();
    if (j.contains("seeds")) {
      c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      file.explicit_seeds = true;
    } else if (c.kind == ExperimentKind::kExp3) {
      const auto master = j.value("master_seed", std::uint64_t{0});
      for (std::size_t i = 0; i < kDefaultSeedCount; ++i) c.seeds.push_back(master + i);
    }
    const auto& stores = j.at("feature_store_paths");
    const auto base = path.parent_path();
    file.train_store = base / stores.at("train").get<std::string>();
    file.test_store = base / stores.at("test").get<std::string>();
  } catch (const ordered_json::exception& e) {
    Fail(ErrorCode::kFormat, path.string() + ": config schema violation: " + e.what());
  } catch (const Error& e) {
    Fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  c.Validate();
  return file;
}

void WriteExperimentOutputs(const ExperimentResult& result, const FeatureSet& test,
                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());

  const auto& cfg = result.config;
  ordered_json index;
  index["kind"] = ToString(cfg.kind);
  index["category"] = cfg.category;
  index["node"] = cfg.node;
  if (cfg.kind == ExperimentKind::kExp3) {
    index["n_min"] = cfg.n_min;
    index["seeds"] = cfg.seeds;
  }
  index["d"] = result.dim;
  index["shrinkage"] = result.shrinkage;
  ordered_json runs = ordered_json::array();
  for (const auto& run : result.runs) {
    ordered_json r;
    r["descriptor"] = run.split.descriptor;
    r["greedy_anomalous"] = CountAnomalous(test, run.split.greedy_rows);
    r["eval_anomalous"] = CountAnomalous(test, run.split.eval_rows);
    ordered_json greedy_ids = ordered_json::array();
    for (auto row : run.split.greedy_rows)
      if (test.samples[row].label == Label::kAnomalous) greedy_ids.push_back(test.samples[row].image_id);
    r["greedy_anomalous_ids"] = std::move(greedy_ids);
    ordered_json files = ordered_json::array();
    for (const auto& cr : run.curves) {
      const auto stem = FileSafe(run.split.descriptor) + "__" + std::string(ToString(cr.curve.method));
      ordered_json f;
      f["method"] = ToString(cr.curve.method);
      f["csv"] = stem + ".csv";
      WriteCurveCsv(cr.curve, out_dir / (stem + ".csv"));
      if (cr.trace) {
        f["trace"] = stem + ".trace.json";
        WriteTraceJson(*cr.trace, out_dir / (stem + ".trace.json"));
      }
      files.push_back(std::move(f));
    }
    r["curves"] = std::move(files);
    runs.push_back(std::move(r));
  }
  index["runs"] = std::move(runs);
  detail::WriteText((out_dir / "index.json").string(), DumpJson(index));
}

}  // namespace eigengreedy
