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

#include "eigengreedy/gaussian_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "binary_io.hpp"
#include "eigengreedy/error.hpp"
#include "score_tree.hpp"

namespace eigengreedy {

namespace {

constexpr std::uint32_t kModelVersion = 1;

Eigen::MatrixXd AsDouble(const FeatureSet& set) { return set.matrix.cast<double>(); }

void RequireFinite(const FeatureSet& set) {
  if (!set.matrix.allFinite()) Fail(ErrorCode::kInvalidArgument, "non-finite feature entry");
}

void RequireDim(std::size_t got, std::size_t want) {
  if (got != want) {
    Fail(ErrorCode::kDimensionMismatch,
         "dimension mismatch: got " + std::to_string(got) + ", model has " + std::to_string(want));
  }
}

}  // namespace

void ComponentSubset::Validate(std::size_t dim) const {
  std::vector<bool> seen(dim, false);
  for (auto i : indices) {
    if (i >= dim) {
      Fail(ErrorCode::kInvalidArgument,
           "component index " + std::to_string(i) + " out of range for d=" + std::to_string(dim));
    }
    if (seen[i]) Fail(ErrorCode::kInvalidArgument, "duplicate component index " + std::to_string(i));
    seen[i] = true;
  }
}

Eigen::VectorXd FitMean(const FeatureSet& train) {
  if (train.rows() == 0 || train.dim() == 0) Fail(ErrorCode::kInvalidArgument, "empty training set");
  RequireFinite(train);
  return AsDouble(train).colwise().mean().transpose();
}

ShrunkCovariance FitCovarianceLedoitWolf(const FeatureSet& train, const Eigen::VectorXd& mean) {
  if (train.rows() < 2) Fail(ErrorCode::kInvalidArgument, "fewer than 2 samples");
  RequireFinite(train);
  return FitCovarianceLedoitWolf(AsDouble(train), mean);
}

ShrunkCovariance FitCovarianceLedoitWolf(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mean) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "fewer than 2 samples");
  if (!rows.allFinite()) Fail(ErrorCode::kInvalidArgument, "non-finite feature entry");
  RequireDim(static_cast<std::size_t>(mean.size()), d);

  const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  const Eigen::MatrixXd sample = (centered.transpose() * centered) / nd;

  // Inner products are normalized by d: <A, B> = tr(A B^T) / d.
  const double target_scale = sample.trace() / dd;
  Eigen::MatrixXd offset = sample;
  offset.diagonal().array() -= target_scale;
  const double dist2 = offset.squaredNorm() / dd;

  // sum_k ||x_k x_k^T - S||_F^2 = sum_k ||x_k||^4 - n ||S||_F^2
  const double fourth = centered.rowwise().squaredNorm().array().square().sum();
  const double bbar2 = std::max(0.0, (fourth - nd * sample.squaredNorm()) / (nd * nd * dd));
  const double b2 = std::min(bbar2, dist2);
  const double shrinkage = dist2 > 0.0 ? b2 / dist2 : 0.0;

  ShrunkCovariance out;
  out.shrinkage = shrinkage;
  out.covariance = (1.0 - shrinkage) * sample;
  out.covariance.diagonal().array() += shrinkage * target_scale;
  return out;
}

Eigensystem Eigendecompose(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
    Fail(ErrorCode::kInvalidArgument, "covariance must be a non-empty square matrix");
  }
  const double scale = covariance.cwiseAbs().maxCoeff();
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-10 * scale)) Fail(ErrorCode::kInvalidArgument, "covariance is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) Fail(ErrorCode::kDegenerate, "eigensolver did not converge");

  Eigensystem eig;
  eig.values = solver.eigenvalues();
  eig.vectors = solver.eigenvectors();
  const auto d = eig.values.size();

  // Solver output is already ascending; keep its order among equal values.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return eig.values[a] < eig.values[b]; });
  eig.values = Eigen::VectorXd(eig.values(order));
  eig.vectors = Eigen::MatrixXd(eig.vectors(Eigen::all, order));

  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const double v = eig.vectors(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) eig.vectors.col(c) *= -1.0;
        break;
      }
    }
  }

  const double top = eig.values[d - 1];
  if (!(eig.values[0] > 0.0) || !(eig.values[0] > top * std::numeric_limits<double>::epsilon())) {
    Fail(ErrorCode::kDegenerate, "covariance is not positive definite (min eigenvalue " +
                                     std::to_string(eig.values[0]) + ")");
  }
  return eig;
}

GaussianModel::GaussianModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance, double shrinkage,
                             Eigensystem eigen)
    : mean_(std::move(mean)),
      covariance_(std::move(covariance)),
      shrinkage_(shrinkage),
      eigen_(std::move(eigen)) {
  whitening_ = eigen_.values.array().rsqrt().matrix().asDiagonal() * eigen_.vectors.transpose();
}

GaussianModel GaussianModel::Fit(const FeatureSet& train) {
  auto mean = FitMean(train);
  auto shrunk = FitCovarianceLedoitWolf(train, mean);
  return FromParts(std::move(mean), std::move(shrunk.covariance), shrunk.shrinkage);
}

GaussianModel GaussianModel::FromParts(Eigen::VectorXd mean, Eigen::MatrixXd covariance,
                                       double shrinkage) {
  RequireDim(static_cast<std::size_t>(covariance.rows()), static_cast<std::size_t>(mean.size()));
  auto eig = Eigendecompose(covariance);
  return GaussianModel(std::move(mean), std::move(covariance), shrinkage, std::move(eig));
}

Eigen::VectorXd GaussianModel::Whiten(std::span<const double> x) const {
  RequireDim(x.size(), dim());
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  if (!v.allFinite()) Fail(ErrorCode::kInvalidArgument, "non-finite input vector");
  return whitening_ * (v - mean_);
}

double GaussianModel::Mahalanobis(std::span<const double> x) const {
  const Eigen::VectorXd w = Whiten(x);
  return FullScore({w.data(), static_cast<std::size_t>(w.size())});
}

void GaussianModel::Save(const std::filesystem::path& path) const {
  const auto d = dim();
  std::vector<unsigned char> bytes;
  bytes.reserve(16 + 8 * (2 * d + 2 * d * d + 1));
  for (char c : std::string_view("GMD1")) bytes.push_back(static_cast<unsigned char>(c));
  detail::PutU32(bytes, kModelVersion);
  detail::PutU32(bytes, static_cast<std::uint32_t>(d));
  const auto di = static_cast<Eigen::Index>(d);
  for (Eigen::Index i = 0; i < di; ++i) detail::PutF64(bytes, mean_[i]);
  for (Eigen::Index i = 0; i < di; ++i) detail::PutF64(bytes, eigen_.values[i]);
  for (Eigen::Index r = 0; r < di; ++r)
    for (Eigen::Index c = 0; c < di; ++c) detail::PutF64(bytes, eigen_.vectors(r, c));
  for (Eigen::Index r = 0; r < di; ++r)
    for (Eigen::Index c = 0; c < di; ++c) detail::PutF64(bytes, covariance_(r, c));
  detail::PutF64(bytes, shrinkage_);
  detail::WriteAllBytes(path.string(), bytes);
}

GaussianModel GaussianModel::Load(const std::filesystem::path& path) {
  const auto bytes = detail::ReadAllBytes(path.string());
  detail::ByteReader in(bytes, path.string());
  if (in.Magic() != "GMD1") Fail(ErrorCode::kFormat, path.string() + ": bad magic (expected GMD1)");
  const auto version = in.U32();
  if (version != kModelVersion) {
    Fail(ErrorCode::kFormat, path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::size_t d = in.U32();
  if (d == 0) Fail(ErrorCode::kFormat, path.string() + ": d must be positive");
  if (in.remaining() != 8 * (2 * d + 2 * d * d + 1)) {
    Fail(ErrorCode::kFormat, path.string() + ": payload length mismatch");
  }
  const auto di = static_cast<Eigen::Index>(d);
  Eigen::VectorXd mean(di);
  Eigensystem eig{Eigen::VectorXd(di), Eigen::MatrixXd(di, di)};
  Eigen::MatrixXd cov(di, di);
  for (Eigen::Index i = 0; i < di; ++i) mean[i] = in.F64();
  for (Eigen::Index i = 0; i < di; ++i) eig.values[i] = in.F64();
  for (Eigen::Index r = 0; r < di; ++r)
    for (Eigen::Index c = 0; c < di; ++c) eig.vectors(r, c) = in.F64();
  for (Eigen::Index r = 0; r < di; ++r)
    for (Eigen::Index c = 0; c < di; ++c) cov(r, c) = in.F64();
  const double shrinkage = in.F64();
  if (!mean.allFinite() || !eig.values.allFinite() || !eig.vectors.allFinite() || !cov.allFinite()) {
    Fail(ErrorCode::kFormat, path.string() + ": non-finite model entry");
  }
  if (!(eig.values.minCoeff() > 0.0)) Fail(ErrorCode::kFormat, path.string() + ": non-positive eigenvalue");
  return GaussianModel(std::move(mean), std::move(cov), shrinkage, std::move(eig));
}

std::size_t WhiteSet::CountLabel(Label label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void WhiteSet::Validate() const {
  if (rows() != labels.size() || rows() != anomaly_types.size()) {
    Fail(ErrorCode::kInvalidArgument, "white set rows and labels disagree");
  }
  if (!vectors.allFinite()) Fail(ErrorCode::kInvalidArgument, "non-finite white vector entry");
}

WhiteSet WhiteSet::SelectRows(std::span<const std::size_t> rows) const {
  WhiteSet out;
  out.vectors.resize(static_cast<Eigen::Index>(rows.size()), vectors.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= this->rows()) Fail(ErrorCode::kInvalidArgument, "row index out of range");
    out.vectors.row(static_cast<Eigen::Index>(i)) = vectors.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
    out.anomaly_types.push_back(anomaly_types[rows[i]]);
  }
  return out;
}

WhiteSet Whiten(const GaussianModel& model, const FeatureSet& set) {
  RequireDim(set.dim(), model.dim());
  if (set.rows() != set.samples.size()) Fail(ErrorCode::kInvalidArgument, "feature set rows and metadata disagree");
  WhiteSet out;
  out.vectors.resize(static_cast<Eigen::Index>(set.rows()), static_cast<Eigen::Index>(model.dim()));
  Eigen::VectorXd x(static_cast<Eigen::Index>(model.dim()));
  for (Eigen::Index i = 0; i < set.matrix.rows(); ++i) {
    x = set.matrix.row(i).transpose().cast<double>();
    out.vectors.row(i) = model.Whiten({x.data(), static_cast<std::size_t>(x.size())}).transpose();
  }
  for (const auto& s : set.samples) {
    out.labels.push_back(s.label);
    out.anomaly_types.push_back(s.anomaly_type);
  }
  return out;
}

double SubsetScore(std::span<const double> w, const ComponentSubset& subset) {
  subset.Validate(w.size());
  const auto width = detail::TreeWidth(w.size());
  std::vector<double> nodes(2 * width, 0.0);
  for (auto i : subset.indices) nodes[width + i] = w[i] * w[i];
  detail::BuildTree(nodes, width);
  return std::sqrt(detail::RootOf(nodes));
}

double FullScore(std::span<const double> w) {
  const auto width = detail::TreeWidth(w.size());
  std::vector<double> nodes(2 * width, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) nodes[width + i] = w[i] * w[i];
  detail::BuildTree(nodes, width);
  return std::sqrt(detail::RootOf(nodes));
}

}  // namespace eigengreedy
