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

#include "eigengreedy/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"
#include "eigengreedy/error.hpp"
#include "eigengreedy/metrics.hpp"
#include "eigengreedy/parallel.hpp"
#include "eigengreedy/random.hpp"
#include "eigengreedy/records.hpp"

namespace eigengreedy {

namespace {

void RequireCurve(const Curve& curve) {
  if (curve.auroc_values.empty()) Fail(ErrorCode::kInvalidArgument, "empty curve");
}

double PopulationStd(const RowMatrix& m, Eigen::Index col) {
  const auto n = static_cast<double>(m.rows());
  double mean = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) mean += m(r, col);
  mean /= n;
  double ss = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) ss += (m(r, col) - mean) * (m(r, col) - mean);
  return std::sqrt(ss / n);
}

}  // namespace

RegimeSegmentation SegmentRegimes(const Curve& curve, double tolerance) {
  RequireCurve(curve);
  if (!(tolerance >= 0.0)) Fail(ErrorCode::kInvalidArgument, "tolerance must be non-negative");
  const auto& v = curve.auroc_values;
  const auto first_max = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const double floor = v[first_max] - tolerance;

  std::size_t lo = first_max;
  while (lo > 0 && v[lo - 1] >= floor) --lo;
  std::size_t hi = first_max;
  while (hi + 1 < v.size() && v[hi + 1] >= floor) ++hi;
  return {lo + 1, hi + 1, v[first_max], tolerance};
}

KAtMax KAtMaxAuroc(const Curve& curve) {
  RequireCurve(curve);
  const auto& v = curve.auroc_values;
  const auto it = std::max_element(v.begin(), v.end());
  return {static_cast<std::size_t>(it - v.begin()) + 1, *it};
}

std::vector<OrderPoint> SelectionOrder(const SelectionTrace& trace) {
  std::vector<OrderPoint> out;
  for (const auto& s : trace.steps) out.emplace_back(s.step, s.component);
  return out;
}

std::vector<OrderPoint> PcaReferenceOrder(std::size_t dim) {
  std::vector<OrderPoint> out;
  for (std::size_t i = 0; i < dim; ++i) out.emplace_back(i + 1, dim - 1 - i);
  return out;
}

std::vector<OrderPoint> NpcaReferenceOrder(std::size_t dim) {
  std::vector<OrderPoint> out;
  for (std::size_t i = 0; i < dim; ++i) out.emplace_back(i + 1, i);
  return out;
}

std::string_view ToString(Signal signal) { return signal == Signal::kNoise ? "noise" : "redundant"; }

Signal ParseSignal(std::string_view text) {
  if (text == "noise") return Signal::kNoise;
  if (text == "redundant") return Signal::kRedundant;
  Fail(ErrorCode::kInvalidArgument, "unknown signal \"" + std::string(text) + "\"");
}

SyntheticAxes GenerateSyntheticAxes(const SelectionTrace& trace, const WhiteSet& test_white,
                                    std::size_t k_prime, Signal signal, std::uint64_t seed) {
  const auto d = test_white.dim();
  const auto n = static_cast<Eigen::Index>(test_white.rows());
  if (trace.mode != SelectionMode::kBottomUp || trace.dim != d || trace.steps.size() != d) {
    Fail(ErrorCode::kInvalidArgument, "replacement needs a complete bottom-up trace over d components");
  }
  trace.Validate();
  if (k_prime < 1 || k_prime > d) {
    Fail(ErrorCode::kInvalidArgument, "k_prime must be in [1, " + std::to_string(d) + "]");
  }
  if (signal == Signal::kRedundant && k_prime < 2) {
    Fail(ErrorCode::kInvalidArgument, "redundant signal needs k_prime >= 2 (nothing to project)");
  }
  const auto kept = static_cast<Eigen::Index>(k_prime - 1);
  const auto added = static_cast<Eigen::Index>(d - k_prime + 1);

  SyntheticAxes axes;
  axes.retained.resize(n, kept);
  for (Eigen::Index j = 0; j < kept; ++j)
    axes.retained.col(j) = test_white.vectors.col(static_cast<Eigen::Index>(trace.steps[static_cast<std::size_t>(j)].component));

  Rng rng(seed);
  axes.synthetic.resize(n, added);
  if (signal == Signal::kNoise) {
    for (Eigen::Index j = 0; j < added; ++j)
      for (Eigen::Index r = 0; r < n; ++r) axes.synthetic(r, j) = rng.Normal();
  } else {
    const double fan_in = 1.0 / std::sqrt(static_cast<double>(kept));
    Eigen::MatrixXd projection(kept, added);
    for (Eigen::Index j = 0; j < added; ++j)
      for (Eigen::Index i = 0; i < kept; ++i) projection(i, j) = rng.Normal() * fan_in;
    axes.synthetic = axes.retained * projection;
  }

  RowMatrix originals(n, added);
  for (Eigen::Index j = 0; j < added; ++j)
    originals.col(j) = test_white.vectors.col(static_cast<Eigen::Index>(trace.steps[static_cast<std::size_t>(kept + j)].component));
  for (Eigen::Index j = 0; j < added; ++j) {
    const double target = PopulationStd(originals, j);
    const double current = PopulationStd(axes.synthetic, j);
    axes.target_std.push_back(target);
    if (current > 0.0) axes.synthetic.col(j) *= target / current;
  }
  return axes;
}

SimulationResult SimulateReplacement(const GaussianModel& model, const SelectionTrace& trace,
                                     const WhiteSet& test_white, std::size_t k_prime, Signal signal,
                                     std::size_t n_seeds, std::uint64_t master_seed) {
  test_white.Validate();
  if (model.dim() != test_white.dim()) Fail(ErrorCode::kDimensionMismatch, "model and test set differ in dimension");
  if (n_seeds < 1) Fail(ErrorCode::kInvalidArgument, "need at least one seed");
  if (test_white.CountLabel(Label::kNormal) == 0 || test_white.CountLabel(Label::kAnomalous) == 0) {
    Fail(ErrorCode::kInvalidArgument, "test set needs both normal and anomalous samples");
  }
  const auto d = test_white.dim();
  const auto n = test_white.rows();
  // Validates trace and k_prime before any work.
  GenerateSyntheticAxes(trace, test_white, k_prime, signal, master_seed);

  ComponentSubset retained;
  for (std::size_t i = 0; i + 1 < k_prime; ++i) retained.indices.push_back(trace.steps[i].component);
  std::vector<double> base(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = test_white.vectors.row(static_cast<Eigen::Index>(s));
    base[s] = SubsetScore({row.data(), d}, retained);
  }

  SimulationResult result;
  result.k_prime = k_prime;
  result.signal = signal;
  result.n_seeds = n_seeds;
  result.retained_only_auroc = Auroc(base, test_white.labels);
  for (std::size_t k = k_prime; k <= d; ++k) result.k_values.push_back(k);
  const auto steps = result.k_values.size();

  std::vector<std::vector<double>> per_seed(n_seeds);
  ParallelFor(n_seeds, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<double> total(n);
    std::vector<double> scores(n);
    for (std::size_t seed = begin; seed < end; ++seed) {
      const auto stream = DeriveSeed(master_seed, {"replacement", ToString(signal), std::to_string(k_prime),
                                                   std::to_string(seed)});
      const auto axes = GenerateSyntheticAxes(trace, test_white, k_prime, signal, stream);
      for (std::size_t s = 0; s < n; ++s) total[s] = base[s] * base[s];
      auto& aurocs = per_seed[seed];
      for (std::size_t j = 0; j < steps; ++j) {
        for (std::size_t s = 0; s < n; ++s) {
          const double v = axes.synthetic(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j));
          total[s] += v * v;
          scores[s] = std::sqrt(total[s]);
        }
        aurocs.push_back(Auroc(scores, test_white.labels));
      }
    }
  });

  for (std::size_t j = 0; j < steps; ++j) {
    double lo = per_seed[0][j];
    double hi = lo;
    double sum = 0.0;
    for (std::size_t seed = 0; seed < n_seeds; ++seed) {
      const double v = per_seed[seed][j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    // Clamp keeps min <= mean <= max when all seeds agree and rounding drifts.
    result.auroc_min.push_back(lo);
    result.auroc_mean.push_back(std::clamp(sum / static_cast<double>(n_seeds), lo, hi));
    result.auroc_max.push_back(hi);
  }
  return result;
}

std::pair<std::size_t, std::size_t> CanonicalKPrimes(const RegimeSegmentation& regimes) {
  return {regimes.rise_end, regimes.plateau_end};
}

std::string SimulationToCsv(const SimulationResult& result) {
  std::string out = std::string(kSimulationCsvHeader) + "\n";
  const auto prefix = std::string(ToString(result.signal)) + "," + std::to_string(result.k_prime) + "," +
                      std::to_string(result.n_seeds) + ",";
  for (std::size_t i = 0; i < result.k_values.size(); ++i) {
    out += prefix + std::to_string(result.k_values[i]) + "," + FormatDouble(result.auroc_min[i]) + "," +
           FormatDouble(result.auroc_mean[i]) + "," + FormatDouble(result.auroc_max[i]) + "\n";
  }
  return out;
}

void AnalyzeCurveDirectory(const std::filesystem::path& curves_dir, double tolerance,
                           const std::filesystem::path& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(curves_dir, ec)) {
    Fail(ErrorCode::kIo, curves_dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(curves_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".csv" && name != "regimes.csv" &&
        name != "k_at_max.csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) Fail(ErrorCode::kEmptyResult, "no curve CSV files in " + curves_dir.string());

  std::string regimes = "file,method,d,rise_end,plateau_end,max_auroc,tolerance\n";
  std::string kmax = "file,method,d,k,auroc\n";
  for (const auto& path : files) {
    const auto curve = ReadCurveCsv(path);
    const auto seg = SegmentRegimes(curve, tolerance);
    const auto best = KAtMaxAuroc(curve);
    const auto head = path.filename().string() + "," + std::string(ToString(curve.method)) + "," +
                      std::to_string(curve.dim()) + ",";
    regimes += head + std::to_string(seg.rise_end) + "," + std::to_string(seg.plateau_end) + "," +
               FormatDouble(seg.max_auroc) + "," + FormatDouble(seg.tolerance) + "\n";
    kmax += head + std::to_string(best.k) + "," + FormatDouble(best.auroc) + "\n";
  }
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  detail::WriteText((out_dir / "regimes.csv").string(), regimes);
  detail::WriteText((out_dir / "k_at_max.csv").string(), kmax);
}

}  // namespace eigengreedy
