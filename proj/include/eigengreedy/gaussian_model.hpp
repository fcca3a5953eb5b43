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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eigengreedy/feature_store.hpp"

namespace eigengreedy {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Ordered set of eigencomponent indices (0-based, ascending-eigenvalue order).
struct ComponentSubset {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  bool operator==(const ComponentSubset&) const = default;

  // Throws kInvalidArgument for out-of-range or repeated indices.
  void Validate(std::size_t dim) const;
};

struct ShrunkCovariance {
  Eigen::MatrixXd covariance;
  double shrinkage = 0.0;
};

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

// Maximum-likelihood mean of the rows.
Eigen::VectorXd FitMean(const FeatureSet& train);

// Ledoit-Wolf shrinkage toward trace(S)/d * I, with S normalized by n.
ShrunkCovariance FitCovarianceLedoitWolf(const FeatureSet& train, const Eigen::VectorXd& mean);
// Same on double-precision rows.
ShrunkCovariance FitCovarianceLedoitWolf(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mean);

// Symmetric eigendecomposition with ascending eigenvalues and canonical
// signs (first non-negligible entry of every eigenvector is positive).
// Rejects non-symmetric input and non-positive spectra.
Eigensystem Eigendecompose(const Eigen::MatrixXd& covariance);

// Fitted normality model. Immutable once built.
class GaussianModel {
 public:
  static GaussianModel Fit(const FeatureSet& train);
  static GaussianModel FromParts(Eigen::VectorXd mean, Eigen::MatrixXd covariance, double shrinkage);

  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  double shrinkage() const { return shrinkage_; }
  const Eigen::VectorXd& eigenvalues() const { return eigen_.values; }
  const Eigen::MatrixXd& eigenvectors() const { return eigen_.vectors; }
  // Lambda^{-1/2} Q^T; row i projects onto eigenvector i.
  const Eigen::MatrixXd& whitening() const { return whitening_; }

  Eigen::VectorXd Whiten(std::span<const double> x) const;
  double Mahalanobis(std::span<const double> x) const;

  // Binary "GMD1" container, bit-exact round trip.
  void Save(const std::filesystem::path& path) const;
  static GaussianModel Load(const std::filesystem::path& path);

 private:
  GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance, double shrinkage, Eigensystem eigen);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  double shrinkage_ = 0.0;
  Eigensystem eigen_;
  Eigen::MatrixXd whitening_;
};

// White vectors of a labeled sample set, one row per sample.
struct WhiteSet {
  RowMatrix vectors;
  std::vector<Label> labels;
  std::vector<std::string> anomaly_types;

  std::size_t rows() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::size_t CountLabel(Label label) const;

  void Validate() const;
  WhiteSet SelectRows(std::span<const std::size_t> rows) const;
};

WhiteSet Whiten(const GaussianModel& model, const FeatureSet& set);

// Euclidean norm of the entries of `w` at `subset`. Squares are reduced with
// a fixed pairwise tree over all dim slots (unselected slots hold zero), so
// the result depends only on the set of indices, never on their order.
double SubsetScore(std::span<const double> w, const ComponentSubset& subset);

// SubsetScore over every index.
double FullScore(std::span<const double> w);

}  // namespace eigengreedy
