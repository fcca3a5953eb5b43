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

#include "eigengreedy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eigengreedy/error.hpp"

namespace eigengreedy {

RankStatistic ComputeRankStatisticUnchecked(std::span<const double> scores,
                                            std::span<const Label> labels,
                                            std::vector<std::uint32_t>& scratch) {
  const auto n = scores.size();
  scratch.resize(n);
  std::iota(scratch.begin(), scratch.end(), 0U);
  std::sort(scratch.begin(), scratch.end(),
            [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });

  RankStatistic stat;
  std::int64_t normals_below = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    std::int64_t group_anomalous = 0;
    std::int64_t group_normal = 0;
    while (j < n && scores[scratch[j]] == scores[scratch[i]]) {
      if (labels[scratch[j]] == Label::kAnomalous) {
        ++group_anomalous;
      } else {
        ++group_normal;
      }
      ++j;
    }
    stat.twice_u += group_anomalous * (2 * normals_below + group_normal);
    normals_below += group_normal;
    stat.anomalous += group_anomalous;
    i = j;
  }
  stat.normal = normals_below;
  return stat;
}

RankStatistic ComputeRankStatistic(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) Fail(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  bool has_normal = false;
  bool has_anomalous = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) Fail(ErrorCode::kInvalidArgument, "non-finite score");
    (labels[i] == Label::kNormal ? has_normal : has_anomalous) = true;
  }
  if (!has_normal || !has_anomalous) {
    Fail(ErrorCode::kInvalidArgument, "AUROC needs at least one normal and one anomalous sample");
  }
  std::vector<std::uint32_t> scratch;
  return ComputeRankStatisticUnchecked(scores, labels, scratch);
}

double Auroc(std::span<const double> scores, std::span<const Label> labels) {
  return ComputeRankStatistic(scores, labels).auroc();
}

}  // namespace eigengreedy
