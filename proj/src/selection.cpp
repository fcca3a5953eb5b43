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

#include "eigengreedy/selection.hpp"

#include <cmath>
#include <string>

#include "eigengreedy/error.hpp"
#include "eigengreedy/metrics.hpp"
#include "eigengreedy/parallel.hpp"
#include "score_tree.hpp"

namespace eigengreedy {

namespace {

void RequireBothClasses(const WhiteSet& set, const char* what) {
  set.Validate();
  if (set.CountLabel(Label::kNormal) == 0 || set.CountLabel(Label::kAnomalous) == 0) {
    Fail(ErrorCode::kInvalidArgument, std::string(what) + " needs both normal and anomalous samples");
  }
}

void RequireK(std::size_t dim, std::size_t k) {
  if (k < 1 || k > dim) {
    Fail(ErrorCode::kInvalidArgument,
         "k must be in [1, " + std::to_string(dim) + "], got " + std::to_string(k));
  }
}

// Per-sample reduction trees for one greedy run. Owns the only mutable state
// of a search.
class SearchState {
 public:
  SearchState(const WhiteSet& set, bool start_full)
      : labels_(set.labels),
        rows_(set.rows()),
        dim_(set.dim()),
        width_(detail::TreeWidth(set.dim())),
        squares_(rows_ * dim_),
        nodes_(rows_ * 2 * width_, 0.0) {
    for (std::size_t s = 0; s < rows_; ++s) {
      auto tree = Tree(s);
      for (std::size_t i = 0; i < dim_; ++i) {
        const double v = set.vectors(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i));
        squares_[s * dim_ + i] = v * v;
        if (start_full) tree[width_ + i] = v * v;
      }
      detail::BuildTree(tree, width_);
    }
  }

  // Rank statistic with component `c` switched on (adding) or off (removing).
  RankStatistic Evaluate(std::size_t c, bool include, std::vector<double>& scores,
                         std::vector<std::uint32_t>& scratch) const {
    scores.resize(rows_);
    for (std::size_t s = 0; s < rows_; ++s) {
      const double leaf = include ? squares_[s * dim_ + c] : 0.0;
      scores[s] = std::sqrt(detail::RootWithLeaf(Tree(s), width_, c, leaf));
    }
    return ComputeRankStatisticUnchecked(scores, labels_, scratch);
  }

  void Apply(std::size_t c, bool include) {
    for (std::size_t s = 0; s < rows_; ++s)
      detail::SetLeaf(Tree(s), width_, c, include ? squares_[s * dim_ + c] : 0.0);
  }

 private:
  std::span<double> Tree(std::size_t s) { return {nodes_.data() + s * 2 * width_, 2 * width_}; }
  std::span<const double> Tree(std::size_t s) const {
    return {nodes_.data() + s * 2 * width_, 2 * width_};
  }

  std::span<const Label> labels_;
  std::size_t rows_;
  std::size_t dim_;
  std::size_t width_;
  std::vector<double> squares_;
  std::vector<double> nodes_;
};

struct Choice {
  std::size_t component;
  RankStatistic stat;
};

// Evaluates every candidate (possibly concurrently) and reduces with the
// smallest-index tie rule. `candidates` must be ascending.
Choice BestCandidate(const SearchState& state, const std::vector<std::size_t>& candidates,
                     bool include) {
  std::vector<RankStatistic> stats(candidates.size());
  ParallelFor(candidates.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<double> scores;
    std::vector<std::uint32_t> scratch;
    for (std::size_t i = begin; i < end; ++i)
      stats[i] = state.Evaluate(candidates[i], include, scores, scratch);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (stats[i].twice_u > stats[best].twice_u) best = i;
  return {candidates[best], stats[best]};
}

SelectionTrace RunGreedy(const WhiteSet& greedy_set, std::size_t k, SelectionMode mode) {
  RequireBothClasses(greedy_set, "greedy set");
  const auto dim = greedy_set.dim();
  RequireK(dim, k);

  const bool bottom_up = mode == SelectionMode::kBottomUp;
  SearchState state(greedy_set, !bottom_up);
  // Bottom-up candidates are the out-set, top-down candidates the in-set;
  // both start as every component.
  std::vector<std::size_t> candidates(dim);
  for (std::size_t i = 0; i < dim; ++i) candidates[i] = i;

  SelectionTrace trace{mode, dim, {}};
  const std::size_t steps = bottom_up ? k : dim - k;
  for (std::size_t t = 1; t <= steps; ++t) {
    const auto choice = BestCandidate(state, candidates, bottom_up);
    state.Apply(choice.component, bottom_up);
    std::erase(candidates, choice.component);
    trace.steps.push_back({t, choice.component, choice.stat.auroc()});
  }
  return trace;
}

std::vector<double> SubsetScores(const WhiteSet& set, const ComponentSubset& subset) {
  std::vector<double> scores(set.rows());
  for (std::size_t s = 0; s < set.rows(); ++s) {
    const auto row = set.vectors.row(static_cast<Eigen::Index>(s));
    scores[s] = SubsetScore({row.data(), set.dim()}, subset);
  }
  return scores;
}

}  // namespace

std::string_view ToString(SelectionMode mode) {
  return mode == SelectionMode::kBottomUp ? "bottom_up" : "top_down";
}

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kBottomUp: return "bottom_up";
    case Method::kTopDown: return "top_down";
    case Method::kPca: return "pca";
    case Method::kNpca: return "npca";
    case Method::kRange: return "range";
  }
  return "unknown";
}

SelectionMode ParseSelectionMode(std::string_view text) {
  if (text == "bottom_up") return SelectionMode::kBottomUp;
  if (text == "top_down") return SelectionMode::kTopDown;
  Fail(ErrorCode::kInvalidArgument, "unknown selection mode \"" + std::string(text) + "\"");
}

Method ParseMethod(std::string_view text) {
  for (auto m : {Method::kBottomUp, Method::kTopDown, Method::kPca, Method::kNpca, Method::kRange})
    if (ToString(m) == text) return m;
  Fail(ErrorCode::kInvalidArgument, "unknown method \"" + std::string(text) + "\"");
}

bool IsGreedy(Method method) { return method == Method::kBottomUp || method == Method::kTopDown; }

void SelectionTrace::Validate() const {
  std::vector<bool> seen(dim, false);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.step != i + 1) Fail(ErrorCode::kInvalidArgument, "trace steps must be numbered 1, 2, ...");
    if (s.component >= dim || seen[s.component]) {
      Fail(ErrorCode::kInvalidArgument, "trace component indices must be distinct and < d");
    }
    if (!(s.greedy_auroc >= 0.0 && s.greedy_auroc <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "trace AUROC outside [0, 1]");
    }
    seen[s.component] = true;
  }
  const std::size_t limit = mode == SelectionMode::kBottomUp ? dim : (dim == 0 ? 0 : dim - 1);
  if (dim == 0 || steps.size() > limit) Fail(ErrorCode::kInvalidArgument, "trace longer than d allows");
}

SelectionTrace GreedyBottomUp(const WhiteSet& greedy_set, std::size_t k) {
  return RunGreedy(greedy_set, k, SelectionMode::kBottomUp);
}

SelectionTrace GreedyTopDown(const WhiteSet& greedy_set, std::size_t k) {
  return RunGreedy(greedy_set, k, SelectionMode::kTopDown);
}

ComponentSubset NpcaSubset(std::size_t dim, std::size_t k) {
  RequireK(dim, k);
  return RangeSubset(dim, 0, k);
}

ComponentSubset PcaSubset(std::size_t dim, std::size_t k) {
  RequireK(dim, k);
  return RangeSubset(dim, dim - k, dim);
}

ComponentSubset RangeSubset(std::size_t dim, std::size_t lo, std::size_t hi) {
  if (!(lo < hi && hi <= dim)) {
    Fail(ErrorCode::kInvalidArgument, "range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                          ") is empty or exceeds d=" + std::to_string(dim));
  }
  ComponentSubset out;
  for (std::size_t i = lo; i < hi; ++i) out.indices.push_back(i);
  return out;
}

ComponentSubset SlidingRangeSubset(std::size_t dim, std::size_t lo, std::size_t k) {
  RequireK(dim, k);
  if (lo > dim) Fail(ErrorCode::kInvalidArgument, "range_lo must be in [0, " + std::to_string(dim) + "]");
  const std::size_t start = std::min(lo, dim - k);
  return RangeSubset(dim, start, start + k);
}

ComponentSubset SubsetAt(const SelectionTrace& trace, std::size_t k) {
  RequireK(trace.dim, k);
  ComponentSubset out;
  if (trace.mode == SelectionMode::kBottomUp) {
    if (trace.steps.size() < k) Fail(ErrorCode::kInvalidArgument, "trace shorter than k");
    for (std::size_t i = 0; i < k; ++i) out.indices.push_back(trace.steps[i].component);
    return out;
  }
  const std::size_t removals = trace.dim - k;
  if (trace.steps.size() < removals) Fail(ErrorCode::kInvalidArgument, "trace shorter than d-k");
  std::vector<bool> removed(trace.dim, false);
  for (std::size_t i = 0; i < removals; ++i) removed[trace.steps[i].component] = true;
  for (std::size_t i = 0; i < trace.dim; ++i)
    if (!removed[i]) out.indices.push_back(i);
  return out;
}

void Curve::Validate() const {
  const auto d = k_values.size();
  if (d == 0 || auroc_values.size() != d || changed_components.size() != d ||
      (greedy_auroc_values && greedy_auroc_values->size() != d)) {
    Fail(ErrorCode::kInvalidArgument, "curve arrays must all have length d >= 1");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (k_values[i] != i + 1) Fail(ErrorCode::kInvalidArgument, "curve k values must be 1..d");
    if (!(auroc_values[i] >= 0.0 && auroc_values[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "curve AUROC outside [0, 1]");
    }
    if (greedy_auroc_values && !((*greedy_auroc_values)[i] >= 0.0 && (*greedy_auroc_values)[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument, "curve greedy AUROC outside [0, 1]");
    }
  }
}

double SubsetAuroc(const WhiteSet& set, const ComponentSubset& subset) {
  return Auroc(SubsetScores(set, subset), set.labels);
}

CurveResult ComputeCurve(const WhiteSet& greedy_set, const WhiteSet& eval_set, Method method,
                         const CurveOptions& options) {
  RequireBothClasses(greedy_set, "greedy set");
  RequireBothClasses(eval_set, "eval set");
  if (greedy_set.dim() != eval_set.dim()) {
    Fail(ErrorCode::kDimensionMismatch, "greedy and eval sets differ in dimension");
  }
  const auto d = eval_set.dim();
  if (method == Method::kRange && options.range_lo > d) {
    Fail(ErrorCode::kInvalidArgument, "range_lo must be in [0, " + std::to_string(d) + "]");
  }

  CurveResult result;
  Curve& curve = result.curve;
  curve.method = method;
  if (method == Method::kBottomUp) result.trace = GreedyBottomUp(greedy_set, d);
  if (method == Method::kTopDown) result.trace = GreedyTopDown(greedy_set, 1);
  if (result.trace) curve.greedy_auroc_values.emplace();

  for (std::size_t k = 1; k <= d; ++k) {
    ComponentSubset subset;
    std::optional<std::size_t> changed;
    switch (method) {
      case Method::kBottomUp:
        subset = SubsetAt(*result.trace, k);
        changed = result.trace->steps[k - 1].component;
        curve.greedy_auroc_values->push_back(result.trace->steps[k - 1].greedy_auroc);
        break;
      case Method::kTopDown:
        subset = SubsetAt(*result.trace, k);
        if (k < d) {
          const auto& step = result.trace->steps[d - k - 1];
          changed = step.component;
          curve.greedy_auroc_values->push_back(step.greedy_auroc);
        } else {
          curve.greedy_auroc_values->push_back(SubsetAuroc(greedy_set, subset));
        }
        break;
      case Method::kPca:
        subset = PcaSubset(d, k);
        changed = d - k;
        break;
      case Method::kNpca:
        subset = NpcaSubset(d, k);
        changed = k - 1;
        break;
      case Method::kRange:
        subset = SlidingRangeSubset(d, options.range_lo, k);
        changed = k <= d - options.range_lo ? options.range_lo + k - 1 : d - k;
        break;
    }
    curve.k_values.push_back(k);
    curve.auroc_values.push_back(SubsetAuroc(eval_set, subset));
    curve.changed_components.push_back(changed);
  }
  return result;
}

}  // namespace eigengreedy
