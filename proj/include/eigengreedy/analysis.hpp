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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigengreedy/gaussian_model.hpp"
#include "eigengreedy/selection.hpp"

namespace eigengreedy {

inline constexpr double kDefaultRegimeTolerance = 0.005;

// Rise: k in [1, rise_end]. Plateau: (rise_end, plateau_end]. Drop: the rest.
// rise_end is also the first k of the plateau band.
struct RegimeSegmentation {
  std::size_t rise_end = 1;
  std::size_t plateau_end = 1;
  double max_auroc = 0.0;
  double tolerance = 0.0;
};

// The plateau is the maximal run of k with AUROC >= max - tolerance that
// contains the smallest k reaching the maximum.
RegimeSegmentation SegmentRegimes(const Curve& curve, double tolerance = kDefaultRegimeTolerance);

struct KAtMax {
  std::size_t k = 0;
  double auroc = 0.0;
};

// Smallest k attaining the maximal eval AUROC.
KAtMax KAtMaxAuroc(const Curve& curve);

using OrderPoint = std::pair<std::size_t, std::size_t>;  // (1-based step, component)

std::vector<OrderPoint> SelectionOrder(const SelectionTrace& trace);
std::vector<OrderPoint> PcaReferenceOrder(std::size_t dim);   // slope -1
std::vector<OrderPoint> NpcaReferenceOrder(std::size_t dim);  // slope +1

enum class Signal { kNoise, kRedundant };

std::string_view ToString(Signal signal);
Signal ParseSignal(std::string_view text);

inline constexpr std::size_t kDefaultSimulationSeeds = 30;

struct SimulationResult {
  std::size_t k_prime = 1;
  Signal signal = Signal::kNoise;
  std::size_t n_seeds = 0;
  std::vector<std::size_t> k_values;  // k_prime..d
  std::vector<double> auroc_min;
  std::vector<double> auroc_mean;
  std::vector<double> auroc_max;
  // AUROC of the k_prime-1 retained components alone.
  double retained_only_auroc = 0.0;
};

// Synthetic axes for one seed: column j replaces trace position
// k_prime-1+j and is rescaled to that component's test-set standard
// deviation.
struct SyntheticAxes {
  RowMatrix retained;   // n x (k_prime-1) white entries in trace order
  RowMatrix synthetic;  // n x (d-k_prime+1)
  std::vector<double> target_std;
};

SyntheticAxes GenerateSyntheticAxes(const SelectionTrace& trace, const WhiteSet& test_white,
                                    std::size_t k_prime, Signal signal, std::uint64_t seed);

// Retains the first k_prime-1 trace components and progressively appends
// synthetic axes; AUROC per k over n_seeds independent seeds derived from
// `master_seed`. `trace` must be a complete bottom-up trace.
SimulationResult SimulateReplacement(const GaussianModel& model, const SelectionTrace& trace,
                                     const WhiteSet& test_white, std::size_t k_prime, Signal signal,
                                     std::size_t n_seeds, std::uint64_t master_seed = 0);

// Plateau start and end as replacement starting positions.
std::pair<std::size_t, std::size_t> CanonicalKPrimes(const RegimeSegmentation& regimes);

inline constexpr const char* kSimulationCsvHeader =
    "signal,k_prime,seed_count,k,auroc_min,auroc_mean,auroc_max";
std::string SimulationToCsv(const SimulationResult& result);

// Reads every curve CSV in `curves_dir` (sorted by name) and writes
// regimes.csv and k_at_max.csv into `out_dir`.
void AnalyzeCurveDirectory(const std::filesystem::path& curves_dir, double tolerance,
                           const std::filesystem::path& out_dir);

}  // namespace eigengreedy
