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

// Synthetic data shared by unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigengreedy/feature_store.hpp"
#include "eigengreedy/gaussian_model.hpp"
#include "oracles/portable_normal.hpp"

namespace eigengreedy::testing {

inline Eigen::MatrixXd NormalMatrix(std::size_t n, std::size_t d, std::uint64_t seed) {
  PortableNormal g(seed);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = g.normal();
  return m;
}

// Same generator as ledoit_wolf_reference.py.
inline Eigen::MatrixXd ReferenceDataset(std::uint64_t seed, int n, int d) {
  PortableNormal g(seed);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = g.normal() * (1.0 + (j % 3)) + 0.25 * j;
  return x;
}

inline Eigen::MatrixXd RandomOrthogonal(std::size_t d, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(NormalMatrix(d, d, seed));
  return qr.householderQ();
}

// Random SPD covariance with eigenvalues spread over [0.2, 5].
inline Eigen::MatrixXd RandomSpd(std::size_t d, std::uint64_t seed) {
  const Eigen::MatrixXd q = RandomOrthogonal(d, seed);
  PortableNormal g(seed ^ 0xABCDEFULL);
  Eigen::VectorXd ev(static_cast<Eigen::Index>(d));
  for (auto& v : ev) v = 0.2 + 4.8 * g.uniform();
  Eigen::MatrixXd s = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

inline FeatureSet MakeSet(const Eigen::MatrixXd& x, std::vector<SampleMeta> samples,
                          std::string category = "synthetic", std::string node = "features.6") {
  FeatureSet set;
  set.matrix = x.cast<float>();
  set.samples = std::move(samples);
  set.category = std::move(category);
  set.node = std::move(node);
  return set;
}

inline std::vector<SampleMeta> TrainMeta(std::size_t n) {
  std::vector<SampleMeta> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back({"train/good/" + std::to_string(i) + ".png", Split::kTrain, Label::kNormal, "good"});
  return out;
}

inline SampleMeta TestMeta(const std::string& type, std::size_t i) {
  const bool good = type == "good";
  return {"test/" + type + "/" + std::to_string(i) + ".png", Split::kTest,
          good ? Label::kNormal : Label::kAnomalous, type};
}

// Train set of n Gaussian rows with covariance `cov` (via Cholesky).
inline FeatureSet GaussianTrainSet(std::size_t n, const Eigen::MatrixXd& cov, std::uint64_t seed) {
  const Eigen::MatrixXd l = cov.llt().matrixL();
  const Eigen::MatrixXd x = NormalMatrix(n, static_cast<std::size_t>(cov.rows()), seed) * l.transpose();
  return MakeSet(x, TrainMeta(n));
}

// Labeled white set: normal rows ~ N(0, I); anomalous rows shifted by
// +-shift along each of `signal_axes`.
inline WhiteSet SyntheticWhiteSet(std::size_t normals, std::size_t anomalies, std::size_t d,
                                  const std::vector<std::size_t>& signal_axes, double shift,
                                  std::uint64_t seed) {
  PortableNormal g(seed);
  WhiteSet w;
  w.vectors.resize(static_cast<Eigen::Index>(normals + anomalies), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < normals + anomalies; ++r) {
    const bool anomalous = r >= normals;
    for (std::size_t c = 0; c < d; ++c) w.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = g.normal();
    if (anomalous) {
      for (auto a : signal_axes) {
        const double sign = g.uniform() < 0.5 ? -1.0 : 1.0;
        w.vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) += sign * shift;
      }
    }
    w.labels.push_back(anomalous ? Label::kAnomalous : Label::kNormal);
    w.anomaly_types.push_back(anomalous ? "defect" : "good");
  }
  return w;
}

// Feature-space problem whose anomalies differ from normal data only along
// three eigenvectors of the fitted model. Each anomaly is displaced along one
// of them (cycling through the three), so no two planted axes alone separate
// the classes.
struct PlantedProblem {
  FeatureSet train;
  FeatureSet test;
  GaussianModel model;
  std::vector<std::size_t> planted;
};

inline PlantedProblem MakePlantedProblem(std::uint64_t seed = 7) {
  constexpr std::size_t d = 30;
  constexpr std::size_t n_train = 400;
  constexpr std::size_t n_normal = 200;
  constexpr std::size_t n_anomalous = 100;
  constexpr double shift = 7.0;  // in white units
  const std::vector<std::size_t> planted = {4, 17, 26};

  const Eigen::MatrixXd cov = RandomSpd(d, seed);
  auto train = GaussianTrainSet(n_train, cov, seed + 1);
  auto model = GaussianModel::Fit(train);

  const Eigen::MatrixXd l = cov.llt().matrixL();
  const Eigen::MatrixXd x = NormalMatrix(n_normal + n_anomalous, d, seed + 2) * l.transpose();
  Eigen::MatrixXd test_x = x;
  PortableNormal signs(seed + 3);
  std::vector<SampleMeta> meta;
  for (std::size_t i = 0; i < n_normal; ++i) meta.push_back(TestMeta("good", i));
  for (std::size_t i = 0; i < n_anomalous; ++i) {
    const auto r = static_cast<Eigen::Index>(n_normal + i);
    const auto a = static_cast<Eigen::Index>(planted[i % planted.size()]);
    const double sign = signs.uniform() < 0.5 ? -1.0 : 1.0;
    test_x.row(r) += sign * shift * std::sqrt(model.eigenvalues()[a]) * model.eigenvectors().col(a).transpose();
    meta.push_back(TestMeta(i % 2 == 0 ? "scratch" : "dent", i));
  }
  auto test = MakeSet(test_x, std::move(meta));
  return {std::move(train), std::move(test), std::move(model), planted};
}

// MVTec-AD test split: anomaly-type counts and normal test counts per category.
struct CategoryCounts {
  std::string category;
  std::vector<std::pair<std::string, std::size_t>> types;
  std::size_t good;
  std::size_t exp3_greedy;  // expected greedy anomalous count for n_min = 15
  std::size_t exp3_eval;
};

inline const std::vector<CategoryCounts>& MvtecCounts() {
  static const std::vector<CategoryCounts> counts = {
      {"bottle", {{"broken_small", 22}, {"contamination", 21}, {"broken_large", 20}}, 20, 15, 48},
      {"cable",
       {{"missing_wire", 10}, {"cable_swap", 12}, {"bent_wire", 13}, {"cut_inner_insulation", 14},
        {"poke_insulation", 10}, {"missing_cable", 12}, {"cut_outer_insulation", 10}, {"combined", 11}},
       58, 16, 76},
      {"capsule", {{"poke", 21}, {"faulty_imprint", 22}, {"squeeze", 20}, {"crack", 23}, {"scratch", 23}}, 23, 15, 94},
      {"carpet", {{"cut", 17}, {"thread", 19}, {"hole", 17}, {"metal_contamination", 17}, {"color", 19}}, 28, 15, 74},
      {"grid", {{"broken", 12}, {"thread", 11}, {"bent", 12}, {"glue", 11}, {"metal_contamination", 11}}, 21, 15, 42},
      {"hazelnut", {{"print", 17}, {"hole", 18}, {"cut", 17}, {"crack", 18}}, 40, 16, 54},
      {"leather", {{"glue", 19}, {"cut", 19}, {"fold", 17}, {"poke", 18}, {"color", 19}}, 32, 15, 77},
      {"metal_nut", {{"color", 22}, {"bent", 25}, {"scratch", 23}, {"flip", 23}}, 22, 16, 77},
      {"pill",
       {{"color", 25}, {"scratch", 24}, {"contamination", 21}, {"combined", 17}, {"faulty_imprint", 19},
        {"pill_type", 9}, {"crack", 26}},
       26, 21, 120},
      {"screw",
       {{"scratch_head", 24}, {"thread_top", 23}, {"scratch_neck", 25}, {"thread_side", 23}, {"manipulated_front", 24}},
       41, 15, 104},
      {"tile", {{"glue_strip", 18}, {"gray_stroke", 16}, {"oil", 18}, {"crack", 17}, {"rough", 15}}, 33, 15, 69},
      {"toothbrush", {{"defective", 30}}, 12, 15, 15},
      {"transistor", {{"cut_lead", 10}, {"misplaced", 10}, {"damaged_case", 10}, {"bent_lead", 10}}, 60, 16, 24},
      {"wood", {{"color", 8}, {"liquid", 10}, {"hole", 10}, {"combined", 11}, {"scratch", 21}}, 19, 15, 45},
      {"zipper",
       {{"combined", 16}, {"broken_teeth", 19}, {"split_teeth", 18}, {"squeezed_teeth", 16}, {"rough", 17},
        {"fabric_interior", 16}, {"fabric_border", 17}},
       32, 21, 98},
  };
  return counts;
}

inline const CategoryCounts& CountsFor(const std::string& category) {
  for (const auto& c : MvtecCounts())
    if (c.category == category) return c;
  throw std::out_of_range(category);
}

// Metadata-only test set (2-d random features) replicating a category's counts.
inline FeatureSet CategoryTestSet(const CategoryCounts& c, std::uint64_t seed = 1) {
  std::vector<SampleMeta> meta;
  for (std::size_t i = 0; i < c.good; ++i) meta.push_back(TestMeta("good", i));
  for (const auto& [type, count] : c.types)
    for (std::size_t i = 0; i < count; ++i) meta.push_back(TestMeta(type, i));
  const auto n = meta.size();
  return MakeSet(NormalMatrix(n, 2, seed), std::move(meta), c.category);
}

}  // namespace eigengreedy::testing
