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

#include "eigengreedy/feature_store.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "eigengreedy/error.hpp"

namespace eigengreedy {

namespace {

using nlohmann::ordered_json;

std::string ToStdString(std::string_view s) { return std::string(s); }

void CheckSample(const SampleMeta& s, std::size_t row) {
  const bool good = s.anomaly_type == kNormalAnomalyType;
  if ((s.label == Label::kNormal) != good) {
    Fail(ErrorCode::kInvalidArgument,
         "sample " + std::to_string(row) + " (" + s.image_id +
             "): label must be normal exactly when anomaly_type is \"good\"");
  }
  if (s.split == Split::kTrain && s.label != Label::kNormal) {
    Fail(ErrorCode::kInvalidArgument,
         "sample " + std::to_string(row) + " (" + s.image_id + "): train rows must be normal");
  }
}

}  // namespace

std::string_view ToString(Split split) { return split == Split::kTrain ? "train" : "test"; }

std::string_view ToString(Label label) {
  return label == Label::kNormal ? "normal" : "anomalous";
}

Split ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  Fail(ErrorCode::kFormat, "unknown split \"" + ToStdString(text) + "\"");
}

Label ParseLabel(std::string_view text) {
  if (text == "normal") return Label::kNormal;
  if (text == "anomalous") return Label::kAnomalous;
  Fail(ErrorCode::kFormat, "unknown label \"" + ToStdString(text) + "\"");
}

void FeatureSet::Validate() const {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    Fail(ErrorCode::kInvalidArgument, "feature set needs n >= 1 and d >= 1");
  }
  if (rows() != samples.size()) {
    Fail(ErrorCode::kInvalidArgument, "matrix has " + std::to_string(rows()) +
                                          " rows but metadata lists " +
                                          std::to_string(samples.size()) + " samples");
  }
  if (!matrix.allFinite()) Fail(ErrorCode::kInvalidArgument, "non-finite feature entry");
  for (std::size_t i = 0; i < samples.size(); ++i) CheckSample(samples[i], i);
}

SamplePredicate SplitIs(Split split) {
  return [split](const SampleMeta& s) { return s.split == split; };
}

SamplePredicate LabelIs(Label label) {
  return [label](const SampleMeta& s) { return s.label == label; };
}

SamplePredicate AnomalyTypeIs(std::string anomaly_type) {
  return [t = std::move(anomaly_type)](const SampleMeta& s) { return s.anomaly_type == t; };
}

std::filesystem::path MatrixPath(const std::filesystem::path& stem) {
  return std::filesystem::path(stem.string() + ".fvs");
}

std::filesystem::path ManifestPath(const std::filesystem::path& stem) {
  return std::filesystem::path(stem.string() + ".json");
}

void WriteFeatureSet(const FeatureSet& set, const std::filesystem::path& stem) {
  set.Validate();
  const auto n = set.rows();
  const auto d = set.dim();
  if (n > UINT32_MAX || d > UINT32_MAX) Fail(ErrorCode::kInvalidArgument, "feature set too large");

  std::vector<unsigned char> bytes;
  bytes.reserve(kFvsHeaderBytes + 4 * n * d);
  for (char c : std::string_view("FVS1")) bytes.push_back(static_cast<unsigned char>(c));
  detail::PutU32(bytes, kFvsVersion);
  detail::PutU32(bytes, static_cast<std::uint32_t>(n));
  detail::PutU32(bytes, static_cast<std::uint32_t>(d));
  for (Eigen::Index i = 0; i < set.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < set.matrix.cols(); ++j) detail::PutF32(bytes, set.matrix(i, j));

  ordered_json manifest;
  manifest["category"] = set.category;
  manifest["node"] = set.node;
  ordered_json samples = ordered_json::array();
  for (const auto& s : set.samples) {
    samples.push_back({{"image_id", s.image_id},
                       {"split", ToString(s.split)},
                       {"label", ToString(s.label)},
                       {"anomaly_type", s.anomaly_type}});
  }
  manifest["samples"] = std::move(samples);

  detail::WriteAllBytes(MatrixPath(stem).string(), bytes);
  detail::WriteText(ManifestPath(stem).string(), manifest.dump(2) + "\n");
}

namespace {

FeatureMatrix ReadMatrix(const std::filesystem::path& path) {
  const auto bytes = detail::ReadAllBytes(path.string());
  detail::ByteReader in(bytes, path.string());
  if (bytes.size() < kFvsHeaderBytes) Fail(ErrorCode::kFormat, path.string() + ": truncated header");
  if (in.Magic() != "FVS1") Fail(ErrorCode::kFormat, path.string() + ": bad magic (expected FVS1)");
  const auto version = in.U32();
  if (version != kFvsVersion) {
    Fail(ErrorCode::kFormat, path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::size_t n = in.U32();
  const std::size_t d = in.U32();
  if (n == 0 || d == 0) Fail(ErrorCode::kFormat, path.string() + ": n and d must be positive");
  if (in.remaining() != 4 * n * d) {
    Fail(ErrorCode::kFormat, path.string() + ": payload length mismatch (header says " +
                                 std::to_string(n) + "x" + std::to_string(d) + ", found " +
                                 std::to_string(in.remaining()) + " payload bytes)");
  }
  FeatureMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const float v = in.F32();
      if (!std::isfinite(v)) {
        Fail(ErrorCode::kFormat, path.string() + ": non-finite entry at row " +
                                     std::to_string(i) + ", column " + std::to_string(j));
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return m;
}

std::string RequireString(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) {
    Fail(ErrorCode::kFormat, where + ": missing string field \"" + key + "\"");
  }
  return obj[key].get<std::string>();
}

}  // namespace

FeatureSet ReadFeatureSet(const std::filesystem::path& stem) {
  FeatureSet set;
  set.matrix = ReadMatrix(MatrixPath(stem));

  const auto manifest_path = ManifestPath(stem).string();
  ordered_json manifest;
  try {
    manifest = ordered_json::parse(detail::ReadText(manifest_path));
  } catch (const ordered_json::parse_error& e) {
    Fail(ErrorCode::kFormat, manifest_path + ": " + e.what());
  }
  set.category = RequireString(manifest, "category", manifest_path);
  set.node = RequireString(manifest, "node", manifest_path);
  if (!manifest.contains("samples") || !manifest["samples"].is_array()) {
    Fail(ErrorCode::kFormat, manifest_path + ": missing array field \"samples\"");
  }
  for (const auto& s : manifest["samples"]) {
    SampleMeta meta;
    meta.image_id = RequireString(s, "image_id", manifest_path);
    meta.split = ParseSplit(RequireString(s, "split", manifest_path));
    meta.label = ParseLabel(RequireString(s, "label", manifest_path));
    meta.anomaly_type = RequireString(s, "anomaly_type", manifest_path);
    set.samples.push_back(std::move(meta));
  }
  if (set.samples.size() != set.rows()) {
    Fail(ErrorCode::kFormat, manifest_path + ": manifest lists " +
                                 std::to_string(set.samples.size()) + " samples but matrix has " +
                                 std::to_string(set.rows()) + " rows");
  }
  try {
    set.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kFormat, manifest_path + ": " + e.what());
  }
  return set;
}

FeatureSet FilterSamples(const FeatureSet& set, const SamplePredicate& keep) {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < set.samples.size(); ++i)
    if (keep(set.samples[i])) rows.push_back(static_cast<Eigen::Index>(i));
  if (rows.empty()) Fail(ErrorCode::kEmptyResult, "no samples match the filter");

  FeatureSet out;
  out.node = set.node;
  out.category = set.category;
  out.matrix = set.matrix(rows, Eigen::all);
  out.samples.reserve(rows.size());
  for (auto r : rows) out.samples.push_back(set.samples[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<std::string> AnomalyTypes(const FeatureSet& set) {
  std::set<std::string> types;
  for (const auto& s : set.samples)
    if (s.label == Label::kAnomalous) types.insert(s.anomaly_type);
  return {types.begin(), types.end()};
}

StoreReport ValidateStore(const std::filesystem::path& stem) {
  const auto set = ReadFeatureSet(stem);
  StoreReport report;
  report.rows = set.rows();
  report.dim = set.dim();
  for (const auto& s : set.samples) {
    if (s.split == Split::kTrain) {
      ++report.train_rows;
    } else if (s.label == Label::kNormal) {
      ++report.test_normal_rows;
    } else {
      ++report.test_anomalous_rows;
    }
  }
  report.anomaly_types = AnomalyTypes(set);
  return report;
}

}  // namespace eigengreedy
