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
#include <cstring>
#include <vector>

#include "doctest.h"
#include "eigengreedy/error.hpp"
#include "eigengreedy/gaussian_model.hpp"
#include "eigengreedy/metrics.hpp"
#include "fixtures.hpp"
#include "oracles/ledoit_wolf_frozen.hpp"
#include "oracles/oracles.hpp"
#include "temp_dir.hpp"

namespace eg = eigengreedy;
namespace egt = eigengreedy::testing;

namespace {

eg::FeatureSet Train(const Eigen::MatrixXd& x) { return egt::MakeSet(x, egt::TrainMeta(static_cast<std::size_t>(x.rows()))); }

std::span<const double> Span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

TEST_CASE("mean of one row is the row") {
  Eigen::MatrixXd x(1, 3);
  x << 1.5, -2, 7;
  CHECK(eg::FitMean(Train(x)) == Eigen::Vector3d(1.5, -2, 7));
}

TEST_CASE("mean of (0,0) and (2,4)") {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0, 2, 4;
  CHECK(eg::FitMean(Train(x)) == Eigen::Vector2d(1, 2));
}

TEST_CASE("mean of 1000 standard normal rows") {
  const Eigen::MatrixXd x = egt::NormalMatrix(1000, 6, 42);
  const auto mean = eg::FitMean(Train(x));
  // Direct summation over the float-rounded rows.
  const Eigen::MatrixXd stored = x.cast<float>().cast<double>();
  for (Eigen::Index j = 0; j < 6; ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < 1000; ++i) acc += stored(i, j);
    CHECK(mean[j] == doctest::Approx(acc / 1000.0).epsilon(1e-12));
    CHECK(std::abs(mean[j]) < 0.1);
  }
}

TEST_CASE("empty train set is rejected") {
  eg::FeatureSet empty;
  CHECK_THROWS_AS(eg::FitMean(empty), eg::Error);
}

TEST_CASE("Ledoit-Wolf shrinkage matches the frozen reference values") {
  for (const auto& c : egt::kFrozenShrinkage) {
    CAPTURE(c.seed);
    // Fit on doubles; float storage would perturb the reference data.
    const Eigen::MatrixXd x = egt::ReferenceDataset(c.seed, c.n, c.d);
    CHECK(std::abs(egt::NaiveLedoitWolfShrinkage(x) - c.delta) < 1e-10);
    const Eigen::VectorXd mean = x.colwise().mean().transpose();
    CHECK(std::abs(eg::FitCovarianceLedoitWolf(x, mean).shrinkage - c.delta) < 1e-10);
  }
}

TEST_CASE("library shrinkage matches the naive oracle on stored data") {
  for (const auto& c : egt::kFrozenShrinkage) {
    CAPTURE(c.seed);
    const auto train = Train(egt::ReferenceDataset(c.seed, c.n, c.d));
    const auto mean = eg::FitMean(train);
    const auto fit = eg::FitCovarianceLedoitWolf(train, mean);
    const Eigen::MatrixXd stored = train.matrix.cast<double>();
    CHECK(std::abs(fit.shrinkage - egt::NaiveLedoitWolfShrinkage(stored)) < 1e-10);
    CHECK(fit.shrinkage >= 0.0);
    CHECK(fit.shrinkage <= 1.0);

    const Eigen::RowVectorXd mu = stored.colwise().mean();
    const Eigen::MatrixXd centered = stored.rowwise() - mu;
    const Eigen::MatrixXd s = centered.transpose() * centered / static_cast<double>(c.n);
    const double m = s.trace() / c.d;
    const Eigen::MatrixXd expected =
        (1.0 - fit.shrinkage) * s + fit.shrinkage * m * Eigen::MatrixXd::Identity(c.d, c.d);
    CHECK((fit.covariance - expected).norm() / expected.norm() < 1e-12);
  }
}

TEST_CASE("covariance already equal to mI is left unchanged") {
  // Rows +-e_i scaled: S = (2/2d) * I exactly.
  const int d = 4;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    x(2 * i, i) = 2.0;
    x(2 * i + 1, i) = -2.0;
  }
  const auto train = Train(x);
  const auto fit = eg::FitCovarianceLedoitWolf(train, eg::FitMean(train));
  const Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d) * (8.0 / (2 * d));
  CHECK((fit.covariance - s).norm() < 1e-15);
}

TEST_CASE("three identical rows are degenerate") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 1, 2, 1, 2;
  try {
    eg::GaussianModel::Fit(Train(x));
    FAIL("expected error");
  } catch (const eg::Error& e) {
    CHECK(e.code() == eg::ErrorCode::kDegenerate);
  }
}

TEST_CASE("two distinct rows get zero shrinkage and a singular estimate") {
  // Centered rows are +-u, so every outer product equals S and the intensity is 0.
  Eigen::MatrixXd x(2, 3);
  x << 1, 0, 2, 3, 4, -2;
  const auto train = Train(x);
  const auto fit = eg::FitCovarianceLedoitWolf(train, eg::FitMean(train));
  CHECK(fit.shrinkage == 0.0);
  CHECK_THROWS_AS(eg::GaussianModel::Fit(train), eg::Error);
  try {
    eg::GaussianModel::Fit(train);
  } catch (const eg::Error& e) {
    CHECK(e.code() == eg::ErrorCode::kDegenerate);
  }
}

TEST_CASE("fewer than 2 samples is rejected") {
  Eigen::MatrixXd x(1, 2);
  x << 1, 2;
  CHECK_THROWS_WITH_AS(eg::GaussianModel::Fit(Train(x)), doctest::Contains("fewer than 2 samples"), eg::Error);
}

TEST_CASE("shrunk covariance is positive definite for n < d") {
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(5, 40, 8)));
  CHECK(model.eigenvalues().minCoeff() > 0.0);
  const double m = model.covariance().trace() / 40.0;
  CHECK(model.eigenvalues().minCoeff() >= model.shrinkage() * m * (1 - 1e-9));
}

TEST_CASE("eigendecomposition of diag(4,1)") {
  const Eigen::Matrix2d a = Eigen::Vector2d(4, 1).asDiagonal();
  const auto eig = eg::Eigendecompose(a);
  CHECK(eig.values == Eigen::Vector2d(1, 4));
  CHECK(eig.vectors.col(0) == Eigen::Vector2d(0, 1));
  CHECK(eig.vectors.col(1) == Eigen::Vector2d(1, 0));
}

TEST_CASE("eigendecomposition of identity") {
  const auto eig = eg::Eigendecompose(Eigen::MatrixXd::Identity(5, 5));
  CHECK(eig.values == Eigen::VectorXd::Ones(5));
}

TEST_CASE("random SPD reconstruction and canonical form") {
  const Eigen::MatrixXd a = egt::RandomSpd(8, 99);
  const auto eig = eg::Eigendecompose(a);
  const Eigen::MatrixXd back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((back - a).norm() / a.norm() < 1e-10);
  CHECK((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(8, 8)).norm() < 1e-8);
  for (Eigen::Index i = 1; i < 8; ++i) CHECK(eig.values[i - 1] <= eig.values[i]);
  for (Eigen::Index c = 0; c < 8; ++c) {
    Eigen::Index first = 0;
    while (std::abs(eig.vectors(first, c)) <= 1e-12) ++first;
    CHECK(eig.vectors(first, c) > 0.0);
  }
}

TEST_CASE("eigendecomposition rejects bad input") {
  Eigen::Matrix2d asym;
  asym << 2, 1, 0, 2;
  CHECK_THROWS_AS(eg::Eigendecompose(asym), eg::Error);
  Eigen::Matrix2d indefinite;
  indefinite << 1, 2, 2, 1;
  try {
    eg::Eigendecompose(indefinite);
    FAIL("expected error");
  } catch (const eg::Error& e) {
    CHECK(e.code() == eg::ErrorCode::kDegenerate);
  }
}

TEST_CASE("whitening identities") {
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(60, 12, 5) * egt::RandomSpd(12, 6)));
  const Eigen::MatrixXd& w = model.whitening();
  const Eigen::MatrixXd inv = model.covariance().inverse();
  CHECK((w.transpose() * w - inv).norm() / inv.norm() < 1e-8);
  const Eigen::MatrixXd root = model.eigenvectors() * w;  // symmetric square root of the inverse
  CHECK((root * root - inv).norm() / inv.norm() < 1e-8);
  CHECK((root - root.transpose()).norm() < 1e-10 * root.norm());
}

TEST_CASE("whiten maps the mean to zero and preserves norms for identity covariance") {
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(30, 4, 11)));
  CHECK(model.Whiten(Span(model.mean())).norm() == 0.0);

  const auto unit = eg::GaussianModel::FromParts(Eigen::Vector3d(1, 2, 3), Eigen::MatrixXd::Identity(3, 3), 0.0);
  const Eigen::Vector3d x(4, -1, 0.5);
  const auto w = unit.Whiten(Span(x));
  CHECK(std::abs(w.norm() - (x - unit.mean()).norm()) < 1e-14);
}

TEST_CASE("white entry is the scaled projection onto its eigenvector") {
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(50, 7, 12) * egt::RandomSpd(7, 13)));
  const Eigen::VectorXd x = egt::NormalMatrix(1, 7, 14).row(0).transpose();
  const auto w = model.Whiten(Span(x));
  for (Eigen::Index i = 0; i < 7; ++i) {
    const double p = model.eigenvectors().col(i).dot(x - model.mean()) / std::sqrt(model.eigenvalues()[i]);
    CHECK(std::abs(w[i] - p) < 1e-10);
  }
}

TEST_CASE("Mahalanobis diagonal example and oracle") {
  Eigen::Matrix2d cov = Eigen::Vector2d(4, 1).asDiagonal();
  const auto model = eg::GaussianModel::FromParts(Eigen::Vector2d(1, 1), cov, 0.0);
  const Eigen::Vector2d x(3, 2);
  CHECK(std::abs(model.Mahalanobis(Span(x)) - std::sqrt(2.0)) < 1e-15);
  CHECK(model.Mahalanobis(Span(model.mean())) == 0.0);

  const auto fitted = eg::GaussianModel::Fit(Train(egt::NormalMatrix(80, 10, 21) * egt::RandomSpd(10, 22)));
  const Eigen::MatrixXd xs = egt::NormalMatrix(25, 10, 23) * 2.0;
  for (Eigen::Index r = 0; r < xs.rows(); ++r) {
    const Eigen::VectorXd v = xs.row(r).transpose();
    const double oracle = egt::QuadraticFormMahalanobis(fitted.covariance(), fitted.mean(), v);
    CHECK(std::abs(fitted.Mahalanobis(Span(v)) - oracle) < 1e-8);
    CHECK(std::abs(fitted.Whiten(Span(v)).norm() - fitted.Mahalanobis(Span(v))) < 1e-8);
  }
}

TEST_CASE("Mahalanobis rejects wrong dimension and non-finite input") {
  const auto model = eg::GaussianModel::FromParts(Eigen::Vector2d(0, 0), Eigen::MatrixXd::Identity(2, 2), 0.0);
  const Eigen::Vector3d three(1, 2, 3);
  try {
    model.Mahalanobis(Span(three));
    FAIL("expected error");
  } catch (const eg::Error& e) {
    CHECK(e.code() == eg::ErrorCode::kDimensionMismatch);
  }
  const Eigen::Vector2d nan(std::nan(""), 0);
  CHECK_THROWS_AS(model.Mahalanobis(Span(nan)), eg::Error);
}

TEST_CASE("subset score examples") {
  const std::vector<double> w = {3, 4, 12};
  CHECK(eg::SubsetScore(w, {{0, 1}}) == 5.0);
  CHECK(eg::SubsetScore(w, {{2}}) == 12.0);
  CHECK(eg::SubsetScore(w, {{0, 1, 2}}) == 13.0);
  CHECK(eg::FullScore(w) == 13.0);
  const std::vector<double> neg = {-2.5};
  CHECK(eg::SubsetScore(neg, {{0}}) == 2.5);
  CHECK_THROWS_AS(eg::SubsetScore(w, {{0, 0}}), eg::Error);
  CHECK_THROWS_AS(eg::SubsetScore(w, {{3}}), eg::Error);
}

TEST_CASE("subset score depends only on the index set") {
  const Eigen::MatrixXd x = egt::NormalMatrix(1, 37, 31);
  const std::vector<double> w(x.data(), x.data() + 37);
  const eg::ComponentSubset a{{5, 30, 2, 17, 36, 0}};
  const eg::ComponentSubset b{{36, 0, 17, 2, 30, 5}};
  CHECK(eg::SubsetScore(w, a) == eg::SubsetScore(w, b));
  CHECK(std::abs(eg::SubsetScore(w, a) - egt::PlainSubsetNorm(w, a.indices)) < 1e-14);
}

TEST_CASE("full subset score equals the Mahalanobis distance") {
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(40, 9, 41)));
  const Eigen::VectorXd x = egt::NormalMatrix(1, 9, 42).row(0).transpose();
  const auto w = model.Whiten(Span(x));
  eg::ComponentSubset all;
  for (std::size_t i = 0; i < 9; ++i) all.indices.push_back(i);
  CHECK(eg::SubsetScore(Span(w), all) == model.Mahalanobis(Span(x)));
}

TEST_CASE("whiten a labeled set") {
  const auto problem = egt::MakePlantedProblem();
  const auto white = eg::Whiten(problem.model, problem.test);
  REQUIRE(white.rows() == 300);
  CHECK(white.CountLabel(eg::Label::kAnomalous) == 100);
  CHECK(white.anomaly_types[0] == "good");
  CHECK(white.anomaly_types[200] == "scratch");
  const Eigen::VectorXd x0 = problem.test.matrix.row(7).cast<double>().transpose();
  const Eigen::VectorXd w0 = problem.model.Whiten(Span(x0));
  for (Eigen::Index j = 0; j < 30; ++j) CHECK(white.vectors(7, j) == w0[j]);

  const auto wrong = egt::MakeSet(egt::NormalMatrix(2, 3, 1), {egt::TestMeta("good", 0), egt::TestMeta("x", 1)});
  CHECK_THROWS_AS(eg::Whiten(problem.model, wrong), eg::Error);
}

TEST_CASE("scaling training and test data leaves AUROC unchanged") {
  const auto problem = egt::MakePlantedProblem(3);
  const double c = 7.5;
  auto train = problem.train;
  auto test = problem.test;
  train.matrix *= static_cast<float>(c);
  test.matrix *= static_cast<float>(c);
  const auto base = eg::Whiten(problem.model, problem.test);
  const auto scaled = eg::Whiten(eg::GaussianModel::Fit(train), test);
  std::vector<double> s0, s1;
  for (std::size_t r = 0; r < base.rows(); ++r) {
    s0.push_back(eg::FullScore({base.vectors.row(static_cast<Eigen::Index>(r)).data(), base.dim()}));
    s1.push_back(eg::FullScore({scaled.vectors.row(static_cast<Eigen::Index>(r)).data(), scaled.dim()}));
  }
  for (std::size_t r = 0; r < s0.size(); ++r) CHECK(s1[r] == doctest::Approx(s0[r]).epsilon(1e-6));
  CHECK(std::abs(eg::Auroc(s0, base.labels) - eg::Auroc(s1, scaled.labels)) < 1e-3);
}

TEST_CASE("GMD1 round trip is bit-exact") {
  egt::TempDir dir;
  const auto model = eg::GaussianModel::Fit(Train(egt::NormalMatrix(30, 11, 51) * egt::RandomSpd(11, 52)));
  model.Save(dir / "m.gmd");
  const auto bytes = egt::Slurp(dir / "m.gmd");
  CHECK(bytes.substr(0, 4) == "GMD1");
  CHECK(bytes.size() == 12 + 8 * (11 + 11 + 121 + 121 + 1));
  const auto back = eg::GaussianModel::Load(dir / "m.gmd");
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
  };
  CHECK(same(back.mean(), model.mean()));
  CHECK(same(back.eigenvalues(), model.eigenvalues()));
  CHECK(same(back.eigenvectors(), model.eigenvectors()));
  CHECK(same(back.covariance(), model.covariance()));
  CHECK(same(back.whitening(), model.whitening()));
  CHECK(back.shrinkage() == model.shrinkage());
  back.Save(dir / "again.gmd");
  CHECK(egt::Slurp(dir / "again.gmd") == bytes);

  auto broken = bytes;
  broken[0] = 'X';
  egt::Spit(dir / "bad.gmd", broken);
  CHECK_THROWS_AS(eg::GaussianModel::Load(dir / "bad.gmd"), eg::Error);
  egt::Spit(dir / "short.gmd", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_WITH_AS(eg::GaussianModel::Load(dir / "short.gmd"), doctest::Contains("payload length mismatch"), eg::Error);
}

TEST_CASE("white set row selection") {
  const auto w = egt::SyntheticWhiteSet(4, 2, 3, {1}, 3.0, 5);
  const std::vector<std::size_t> rows = {5, 0};
  const auto sel = w.SelectRows(rows);
  REQUIRE(sel.rows() == 2);
  CHECK(sel.labels[0] == eg::Label::kAnomalous);
  CHECK(sel.vectors.row(1) == w.vectors.row(0));
}
