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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace eigengreedy {

enum class Split { kTrain, kTest };
enum class Label { kNormal, kAnomalous };

inline constexpr std::string_view kNormalAnomalyType = "good";

std::string_view ToString(Split split);
std::string_view ToString(Label label);
Split ParseSplit(std::string_view text);
Label ParseLabel(std::string_view text);

struct SampleMeta {
  std::string image_id;
  Split split = Split::kTest;
  Label label = Label::kNormal;
  std::string anomaly_type{kNormalAnomalyType};

  bool operator==(const SampleMeta&) const = default;
};

using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Image-level feature vectors of one (category, node) pair, one row per
// sample. Rows and `samples` are aligned.
struct FeatureSet {
  FeatureMatrix matrix;
  std::vector<SampleMeta> samples;
  std::string node;
  std::string category;

  std::size_t rows() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(matrix.cols()); }

  // Throws Error on any broken invariant (alignment, emptiness,
  // non-finite entries, label/anomaly-type consistency, abnormal train rows).
  void Validate() const;
};

using SamplePredicate = std::function<bool(const SampleMeta&)>;

SamplePredicate SplitIs(Split split);
SamplePredicate LabelIs(Label label);
SamplePredicate AnomalyTypeIs(std::string anomaly_type);

// On-disk pair: `<stem>.fvs` (binary matrix) and `<stem>.json` (manifest).
std::filesystem::path MatrixPath(const std::filesystem::path& stem);
std::filesystem::path ManifestPath(const std::filesystem::path& stem);

inline constexpr std::uint32_t kFvsVersion = 1;
inline constexpr std::size_t kFvsHeaderBytes = 16;

void WriteFeatureSet(const FeatureSet& set, const std::filesystem::path& stem);
FeatureSet ReadFeatureSet(const std::filesystem::path& stem);

// Rows whose metadata satisfy `keep`, in original order. Throws
// ErrorCode::kEmptyResult when nothing matches.
FeatureSet FilterSamples(const FeatureSet& set, const SamplePredicate& keep);

struct StoreReport {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::size_t train_rows = 0;
  std::size_t test_normal_rows = 0;
  std::size_t test_anomalous_rows = 0;
  std::vector<std::string> anomaly_types;  // sorted, excludes "good"
};

// Full format check of a store; throws the same errors as ReadFeatureSet.
StoreReport ValidateStore(const std::filesystem::path& stem);

// Distinct anomaly types among anomalous rows, sorted.
std::vector<std::string> AnomalyTypes(const FeatureSet& set);

}  // namespace eigengreedy
