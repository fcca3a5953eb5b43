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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "eigengreedy/analysis.hpp"
#include "eigengreedy/error.hpp"
#include "eigengreedy/parallel.hpp"
#include "eigengreedy/random.hpp"
#include "eigengreedy/records.hpp"
#include "fixtures.hpp"
#include "temp_dir.hpp"

namespace eg = eigengreedy;
namespace egt = eigengreedy::testing;

namespace {

eg::Curve CurveOf(std::vector<double> values) {
  eg::Curve c;
  c.method = eg::Method::kBottomUp;
  for (std::size_t k = 1; k <= values.size(); ++k) c.k_values.push_back(k);
  c.auroc_values = std::move(values);
  c.changed_components.assign(c.k_values.size(), std::nullopt);
  return c;
}

double PopulationStd(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

struct SimFixture {
  egt::PlantedProblem problem;
  eg::WhiteSet white;
  eg::SelectionTrace trace;
};

const SimFixture& Planted() {
  static const SimFixture f = [] {
    SimFixture s{egt::MakePlantedProblem(), {}, {}};
    s.white = eg::Whiten(s.problem.model, s.problem.test);
    s.trace = eg::GreedyBottomUp(s.white, s.white.dim());
    return s;
  }();
  return f;
}

}  // namespace

TEST_CASE("regimes of a monotone curve") {
  const auto seg = eg::SegmentRegimes(CurveOf({0.5, 0.6, 0.7, 0.8, 0.9}));
  CHECK(seg.plateau_end == 5);
  CHECK(seg.rise_end == 5);
  CHECK(seg.max_auroc == 0.9);
}

TEST_CASE("regimes of a constant curve") {
  const auto seg = eg::SegmentRegimes(CurveOf(std::vector<double>(12, 1.0)));
  CHECK(seg.rise_end == 1);
  CHECK(seg.plateau_end == 12);
}

TEST_CASE("regimes of the step curve") {
  std::vector<double> v;
  for (int k = 1; k <= 30; ++k) v.push_back(k < 5 ? 0.6 : (k <= 20 ? 1.0 : 0.8));
  const auto seg = eg::SegmentRegimes(CurveOf(v), 0.005);
  CHECK(seg.rise_end == 5);
  CHECK(seg.plateau_end == 20);
  CHECK(seg.tolerance == 0.005);
}

TEST_CASE("plateau band spans values within tolerance around the first maximum") {
  const auto seg = eg::SegmentRegimes(CurveOf({0.5, 0.897, 0.9, 0.899, 0.85, 0.9}), 0.005);
  CHECK(seg.rise_end == 2);
  CHECK(seg.plateau_end == 4);
  CHECK_THROWS_AS(eg::SegmentRegimes(eg::Curve{}), eg::Error);
}

TEST_CASE("regime invariants on random curves") {
  eg::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v;
    const auto d = 1 + rng.Below(40);
    for (std::size_t i = 0; i < d; ++i) v.push_back(std::round(rng.Uniform() * 100.0) / 100.0);
    const auto curve = CurveOf(v);
    const double tol = rng.Uniform() * 0.05;
    const auto seg = eg::SegmentRegimes(curve, tol);
    CHECK(1 <= seg.rise_end);
    CHECK(seg.rise_end <= seg.plateau_end);
    CHECK(seg.plateau_end <= d);
    for (std::size_t k = seg.rise_end; k <= seg.plateau_end; ++k) CHECK(v[k - 1] >= seg.max_auroc - tol);
    const auto best = eg::KAtMaxAuroc(curve);
    const auto exact = eg::SegmentRegimes(curve, 0.0);
    CHECK(best.k >= 1);
    CHECK(best.k <= exact.plateau_end);
  }
}

TEST_CASE("k at maximal AUROC") {
  CHECK(eg::KAtMaxAuroc(CurveOf({0.1, 0.2, 0.3})).k == 3);
  CHECK(eg::KAtMaxAuroc(CurveOf({0.7, 0.7, 0.7})).k == 1);
  std::vector<double> v(20, 0.9);
  v[11] = 0.97;
  v[15] = 0.97;
  const auto best = eg::KAtMaxAuroc(CurveOf(v));
  CHECK(best.k == 12);
  CHECK(best.auroc == 0.97);
}

TEST_CASE("selection orders") {
  using P = eg::OrderPoint;
  CHECK(eg::PcaReferenceOrder(3) == std::vector<P>{{1, 2}, {2, 1}, {3, 0}});
  CHECK(eg::NpcaReferenceOrder(3) == std::vector<P>{{1, 0}, {2, 1}, {3, 2}});
  const eg::SelectionTrace trace{eg::SelectionMode::kBottomUp, 4, {{1, 3, 0.6}, {2, 0, 0.7}, {3, 2, 0.8}}};
  CHECK(eg::SelectionOrder(trace) == std::vector<P>{{1, 3}, {2, 0}, {3, 2}});
}

TEST_CASE("canonical replacement positions") {
  const auto seg = eg::SegmentRegimes(CurveOf({0.6, 0.6, 1.0, 1.0, 1.0, 0.7}));
  CHECK(eg::CanonicalKPrimes(seg) == std::pair<std::size_t, std::size_t>{3, 5});
}

TEST_CASE("synthetic axes sizing and std matching") {
  const auto& f = Planted();
  for (auto signal : {eg::Signal::kNoise, eg::Signal::kRedundant}) {
    const auto axes = eg::GenerateSyntheticAxes(f.trace, f.white, 4, signal, 17);
    CHECK(axes.retained.cols() == 3);
    CHECK(axes.synthetic.cols() == 27);
    for (Eigen::Index j = 0; j < 27; ++j) {
      const double target = PopulationStd(f.white.vectors.col(static_cast<Eigen::Index>(f.trace.steps[3 + j].component)));
      CHECK(axes.target_std[static_cast<std::size_t>(j)] == doctest::Approx(target).epsilon(1e-14));
      CHECK(std::abs(PopulationStd(axes.synthetic.col(j)) - target) <= 1e-9 * target);
    }
  }
}

TEST_CASE("redundant axes are exact linear combinations of retained entries") {
  const auto& f = Planted();
  const auto axes = eg::GenerateSyntheticAxes(f.trace, f.white, 5, eg::Signal::kRedundant, 3);
  const Eigen::MatrixXd r = axes.retained;
  const auto qr = r.colPivHouseholderQr();
  for (Eigen::Index j = 0; j < axes.synthetic.cols(); ++j) {
    const Eigen::VectorXd y = axes.synthetic.col(j);
    const Eigen::VectorXd coef = qr.solve(y);
    CHECK((r * coef - y).norm() <= 1e-9 * y.norm());
  }
}

TEST_CASE("synthetic axes example sizing d=10, k'=4") {
  const auto set = egt::SyntheticWhiteSet(30, 15, 10, {0}, 3.0, 1);
  const auto trace = eg::GreedyBottomUp(set, 10);
  const auto axes = eg::GenerateSyntheticAxes(trace, set, 4, eg::Signal::kNoise, 1);
  CHECK(axes.retained.cols() == 3);
  CHECK(axes.synthetic.cols() == 7);  // k = 5 uses the first two
}

TEST_CASE("replacement simulation invariants") {
  const auto& f = Planted();
  const auto sim = eg::SimulateReplacement(f.problem.model, f.trace, f.white, 4, eg::Signal::kNoise, 8, 3);
  CHECK(sim.k_values.front() == 4);
  CHECK(sim.k_values.back() == 30);
  CHECK(sim.n_seeds == 8);
  for (std::size_t i = 0; i < sim.k_values.size(); ++i) {
    CHECK(sim.auroc_min[i] <= sim.auroc_mean[i]);
    CHECK(sim.auroc_mean[i] <= sim.auroc_max[i]);
  }
  // Retained-only baseline equals the bottom-up curve at k' - 1.
  const auto subset = eg::SubsetAt(f.trace, 3);
  CHECK(sim.retained_only_auroc == eg::SubsetAuroc(f.white, subset));

  eg::SetWorkerCount(1);
  const auto again = eg::SimulateReplacement(f.problem.model, f.trace, f.white, 4, eg::Signal::kNoise, 8, 3);
  eg::SetWorkerCount(0);
  CHECK(again.auroc_mean == sim.auroc_mean);
  CHECK(again.auroc_min == sim.auroc_min);
  const auto other = eg::SimulateReplacement(f.problem.model, f.trace, f.white, 4, eg::Signal::kNoise, 8, 4);
  CHECK(other.auroc_mean != sim.auroc_mean);
}

TEST_CASE("replacement simulation direction on the planted fixture") {
  const auto& f = Planted();
  const auto redundant = eg::SimulateReplacement(f.problem.model, f.trace, f.white, 4, eg::Signal::kRedundant, 30, 0);
  const auto noise = eg::SimulateReplacement(f.problem.model, f.trace, f.white, 4, eg::Signal::kNoise, 30, 0);
  for (double m : redundant.auroc_mean) CHECK(std::abs(m - redundant.retained_only_auroc) <= 0.02);
  CHECK(noise.auroc_mean.back() < redundant.auroc_mean.back());
  CHECK(noise.auroc_mean.back() < noise.auroc_mean.front());
}

TEST_CASE("replacement simulation errors") {
  const auto& f = Planted();
  CHECK_THROWS_AS(eg::SimulateReplacement(f.problem.model, f.trace, f.white, 1, eg::Signal::kRedundant, 2), eg::Error);
  CHECK_THROWS_AS(eg::SimulateReplacement(f.problem.model, f.trace, f.white, 31, eg::Signal::kNoise, 2), eg::Error);
  auto partial = f.trace;
  partial.steps.pop_back();
  CHECK_THROWS_AS(eg::SimulateReplacement(f.problem.model, partial, f.white, 4, eg::Signal::kNoise, 2), eg::Error);
  CHECK_NOTHROW(eg::SimulateReplacement(f.problem.model, f.trace, f.white, 1, eg::Signal::kNoise, 2));
}

TEST_CASE("simulation CSV") {
  eg::SimulationResult r;
  r.k_prime = 2;
  r.signal = eg::Signal::kRedundant;
  r.n_seeds = 30;
  r.k_values = {2, 3};
  r.auroc_min = {0.5, 0.25};
  r.auroc_mean = {0.75, 0.5};
  r.auroc_max = {1, 0.875};
  CHECK(eg::SimulationToCsv(r) ==
        "signal,k_prime,seed_count,k,auroc_min,auroc_mean,auroc_max\n"
        "redundant,2,30,2,0.5,0.75,1\n"
        "redundant,2,30,3,0.25,0.5,0.875\n");
}

TEST_CASE("curve directory analysis") {
  egt::TempDir dir;
  auto flat = CurveOf(std::vector<double>(4, 1.0));
  flat.method = eg::Method::kPca;
  eg::WriteCurveCsv(flat, dir / "b.csv");
  eg::WriteCurveCsv(CurveOf({0.5, 0.9, 0.8}), dir / "a.csv");
  eg::AnalyzeCurveDirectory(dir.path(), 0.005, dir / "out");
  CHECK(egt::Slurp(dir / "out/regimes.csv") ==
        "file,method,d,rise_end,plateau_end,max_auroc,tolerance\n"
        "a.csv,bottom_up,3,2,2,0.9,0.005\n"
        "b.csv,pca,4,1,4,1,0.005\n");
  CHECK(egt::Slurp(dir / "out/k_at_max.csv") ==
        "file,method,d,k,auroc\n"
        "a.csv,bottom_up,3,2,0.9\n"
        "b.csv,pca,4,1,1\n");
  egt::TempDir empty;
  CHECK_THROWS_AS(eg::AnalyzeCurveDirectory(empty.path(), 0.005, empty / "out"), eg::Error);
}
