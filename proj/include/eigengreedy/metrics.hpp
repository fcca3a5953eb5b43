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

#include <cstdint>
#include <span>
#include <vector>

#include "eigengreedy/feature_store.hpp"

namespace eigengreedy {

// Exact Mann-Whitney statistic in half-credit units: each (anomalous, normal)
// pair contributes 2 when the anomalous score is larger and 1 on a tie.
struct RankStatistic {
  std::int64_t twice_u = 0;
  std::int64_t anomalous = 0;
  std::int64_t normal = 0;

  double auroc() const {
    return static_cast<double>(twice_u) / (2.0 * static_cast<double>(anomalous) * static_cast<double>(normal));
  }
};

// Sort-based, O(n log n). Throws kInvalidArgument on length mismatch,
// non-finite scores or a single-class label vector.
RankStatistic ComputeRankStatistic(std::span<const double> scores, std::span<const Label> labels);

// Same, reusing `scratch` between calls; inputs are assumed validated.
RankStatistic ComputeRankStatisticUnchecked(std::span<const double> scores,
                                            std::span<const Label> labels,
                                            std::vector<std::uint32_t>& scratch);

// Probability that a random anomalous score beats a random normal one,
// ties counted one half.
double Auroc(std::span<const double> scores, std::span<const Label> labels);

}  // namespace eigengreedy
