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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eigengreedy/gaussian_model.hpp"

namespace eigengreedy {

enum class SelectionMode { kBottomUp, kTopDown };

enum class Method { kBottomUp, kTopDown, kPca, kNpca, kRange };

std::string_view ToString(SelectionMode mode);
std::string_view ToString(Method method);
SelectionMode ParseSelectionMode(std::string_view text);
Method ParseMethod(std::string_view text);
bool IsGreedy(Method method);

struct TraceStep {
  std::size_t step = 0;       // 1-based
  std::size_t component = 0;  // added (bottom-up) or removed (top-down)
  double greedy_auroc = 0.0;  // greedy-set AUROC after this step

  bool operator==(const TraceStep&) const = default;
};

struct SelectionTrace {
  SelectionMode mode = SelectionMode::kBottomUp;
  std::size_t dim = 0;
  std::vector<TraceStep> steps;

  bool operator==(const SelectionTrace&) const = default;
  void Validate() const;
};

// Forward selection: grows the in-set from empty until it holds k
// components, each step adding the component that maximizes greedy-set
// AUROC. Ties go to the smallest component index.
SelectionTrace GreedyBottomUp(const WhiteSet& greedy_set, std::size_t k);

// Backward elimination: shrinks the in-set from all components down to k,
// each step removing the component whose removal maximizes greedy-set AUROC.
SelectionTrace GreedyTopDown(const WhiteSet& greedy_set, std::size_t k);

ComponentSubset NpcaSubset(std::size_t dim, std::size_t k);  // {0, ..., k-1}
ComponentSubset PcaSubset(std::size_t dim, std::size_t k);   // {d-k, ..., d-1}
ComponentSubset RangeSubset(std::size_t dim, std::size_t lo, std::size_t hi);  // {lo, ..., hi-1}

// Window of k consecutive components starting at `lo`, pulled left once it
// would run past d. lo = 0 is NPCA, lo = d is PCA.
ComponentSubset SlidingRangeSubset(std::size_t dim, std::size_t lo, std::size_t k);

// Subset reached after k components under a finished trace: the first k
// additions (bottom-up) or everything but the first d-k removals (top-down).
ComponentSubset SubsetAt(const SelectionTrace& trace, std::size_t k);

struct Curve {
  Method method = Method::kBottomUp;
  std::vector<std::size_t> k_values;
  std::vector<double> auroc_values;                        // eval set
  std::optional<std::vector<double>> greedy_auroc_values;  // greedy methods only
  // Component added to reach k, or removed to reach k for top-down; empty
  // where no single component changed (top-down at k = d).
  std::vector<std::optional<std::size_t>> changed_components;

  std::size_t dim() const { return k_values.size(); }
  bool operator==(const Curve&) const = default;
  void Validate() const;
};

struct CurveOptions {
  std::size_t range_lo = 0;
};

struct CurveResult {
  Curve curve;
  std::optional<SelectionTrace> trace;  // set for greedy methods
};

// k-vs-AUROC for k = 1..d. The eval set is only used for reporting.
CurveResult ComputeCurve(const WhiteSet& greedy_set, const WhiteSet& eval_set, Method method,
                         const CurveOptions& options = {});

// Eval AUROC of one subset.
double SubsetAuroc(const WhiteSet& set, const ComponentSubset& subset);

}  // namespace eigengreedy
