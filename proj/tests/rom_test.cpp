/*
 * Copyright 2026 The podas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstring>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "podas/evaluation.hpp"
#include "podas/rom.hpp"

namespace podas {
namespace {

SnapshotSet problem_snapshots(const SyntheticProblem& problem, Eigen::Index n, std::uint64_t seed) {
  return snapshot_from_problem(problem, sample_uniform(problem.space, n, seed));
}

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

TEST(Train, BeamProxyRankSixFullRbf) {
  const PresetInfo info = make_preset(Preset::BeamProxy);
  const SnapshotSet data = preset_dataset(info);
  const RomModel model = train(data, info.problem.space, {FixedRank{6}, FullRbfMethod{}});
  EXPECT_EQ(model.basis.rank(), 6);
  ASSERT_EQ(model.regressors.size(), 6u);
  for (const auto& r : model.regressors) EXPECT_TRUE(std::holds_alternative<RbfInterpolant>(r));
  EXPECT_EQ(model.info.n_train, 200);
}

TEST(Train, PressureProxyRankNineAsGpr) {
  const PresetInfo info = make_preset(Preset::PressureProxy);
  const SnapshotSet data = problem_snapshots(info.problem, 40, 3);
  RomConfig config{FixedRank{9}, AsGprMethod{GradientMethod::Analytic}};
  const RomModel model = train(data, info.problem.space, config, info.problem.jacobian());
  ASSERT_EQ(model.regressors.size(), 9u);
  for (const auto& r : model.regressors) {
    ASSERT_TRUE(std::holds_alternative<AsRidgeModel>(r));
    EXPECT_EQ(std::get<AsRidgeModel>(r).subspace().active_dim(), 1);
  }
  config.method = AsGprMethod{GradientMethod::LocalLinear};
  EXPECT_EQ(train(data, info.problem.space, config).regressors.size(), 9u);
}

TEST(Train, TwoSnapshotsRankOne) {
  const ParameterSpace space = ParameterSpace::cube(2, 0.0, 1.0);
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(10, 1.0, 2.0);
  ParameterSamples mu{(Eigen::MatrixXd(2, 2) << 0.2, 0.7, 0.4, 0.1).finished(), Frame::Physical};
  Eigen::MatrixXd fields(10, 2);
  fields.col(0) = 1.5 * b;
  fields.col(1) = -0.5 * b;
  const RomModel model = train(SnapshotSet(fields, mu), space, {FixedRank{1}, FullRbfMethod{}});
  for (Eigen::Index j = 0; j < 2; ++j)
    EXPECT_LE(relative_error(fields.col(j), predict(model, mu.values.col(j)).field), 1e-6);
}

TEST(Train, Preconditions) {
  const ParameterSpace space = ParameterSpace::cube(3, 0.0, 1.0);
  const ParameterSamples one = sample_uniform(space, 1, 1);
  EXPECT_THROW(train(SnapshotSet(Eigen::MatrixXd::Ones(4, 1), one), space, {}), InvalidArgument);

  const ParameterSamples four = sample_uniform(space, 4, 2);  // < p + 2
  const SnapshotSet small(Eigen::MatrixXd::Random(6, 4), four);
  EXPECT_THROW(train(small, space, {FixedRank{1}, AsGprMethod{GradientMethod::LocalLinear}}), InvalidArgument);
  EXPECT_THROW(train(small, space, {FixedRank{1}, AsGprMethod{GradientMethod::Analytic}}), InvalidArgument);

  ParameterSamples outside = sample_uniform(space, 5, 3);
  outside.values(0, 2) = 1.5;
  EXPECT_THROW(train(SnapshotSet(Eigen::MatrixXd::Random(6, 5), outside), space, {}), InvalidArgument);
}

TEST(Train, ErrorsNameTheMode) {
  const ParameterSpace space = ParameterSpace::cube(2, 0.0, 1.0);
  ParameterSamples mu = sample_uniform(space, 5, 4);
  mu.values.col(3) = mu.values.col(1);
  try {
    train(SnapshotSet(Eigen::MatrixXd::Random(7, 5), mu), space, {FixedRank{2}, FullRbfMethod{}});
    FAIL() << "expected duplicate-center error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("mode 1"), std::string::npos) << e.what();
  }
}

TEST(Predict, TrainingPointsReproducedFullRank) {
  const SyntheticProblem problem = make_ridge_problem(4, 120, 5, 7);
  const SnapshotSet data = problem_snapshots(problem, 30, 8);
  for (bool center : {false, true}) {
    RomConfig config;
    config.center = center;
    const RomModel model = train(data, problem.space, config);
    for (Eigen::Index j = 0; j < data.count(); ++j) {
      const RomPrediction p = predict(model, data.params().values.col(j));
      EXPECT_LE(relative_error(data.fields().col(j), p.field), 1e-6);
      EXPECT_FALSE(p.out_of_bounds);
    }
  }
}

TEST(Predict, RankEqualsSnapshotCount) {
  std::mt19937_64 gen(9);
  const ParameterSpace space = ParameterSpace::cube(3, -2.0, 3.0);
  const ParameterSamples mu = sample_uniform(space, 8, 10);
  const Eigen::MatrixXd fields = oracle::random_matrix(30, 8, gen);
  for (const RbfKernel kernel : {RbfKernel::thin_plate(), RbfKernel::gaussian(1.0), RbfKernel::multiquadric(1.0)}) {
    const RomModel model = train(SnapshotSet(fields, mu), space, {FixedRank{8}, FullRbfMethod{kernel}});
    for (Eigen::Index j = 0; j < 8; ++j)
      EXPECT_LE(relative_error(fields.col(j), predict(model, mu.values.col(j)).field), 1e-6);
  }
}

TEST(Predict, ReconstructionIsModesTimesCoefficients) {
  const PresetInfo info = make_preset(Preset::BeamProxy);
  const SnapshotSet data = problem_snapshots(info.problem, 30, 11);
  const ParameterSamples probe = sample_uniform(info.problem.space, 10, 12);
  for (bool center : {false, true}) {
    RomConfig config{FixedRank{6}, FullRbfMethod{}};
    config.center = center;
    const RomModel model = train(data, info.problem.space, config);
    for (Eigen::Index j = 0; j < probe.count(); ++j) {
      const RomPrediction p = predict(model, probe.values.col(j));
      Eigen::VectorXd manual = Eigen::VectorXd::Zero(model.basis.dofs());
      const Eigen::VectorXd x = rescale_to_reference(model.space, probe.values.col(j));
      for (Eigen::Index m = 0; m < model.basis.rank(); ++m)
        manual += evaluate_regressor(model.regressors[static_cast<std::size_t>(m)], x) * model.basis.modes.col(m);
      if (center) manual += model.basis.mean;
      EXPECT_LE((p.field - manual).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + manual.cwiseAbs().maxCoeff()));
      EXPECT_LE((p.coefficients - predict_coefficients(model, probe.values.col(j))).norm(), 0.0);
    }
  }
}

TEST(Predict, Deterministic) {
  const PresetInfo info = make_preset(Preset::PressureProxy);
  const SnapshotSet data = problem_snapshots(info.problem, 30, 13);
  const Eigen::VectorXd mu = sample_uniform(info.problem.space, 1, 14).values.col(0);
  for (const RomConfig& config : {RomConfig{FixedRank{9}, FullRbfMethod{}},
                                  RomConfig{FixedRank{9}, AsGprMethod{GradientMethod::LocalLinear}}}) {
    const RomModel a = train(data, info.problem.space, config, {}, 5);
    const RomModel b = train(data, info.problem.space, config, {}, 5);
    EXPECT_TRUE(bitwise_equal(predict(a, mu).field, predict(b, mu).field));
  }
}

TEST(Predict, OutOfBoundsIsFlaggedAndExtrapolated) {
  const SyntheticProblem problem = make_ridge_problem(3, 50, 2, 15);
  const RomModel model = train(problem_snapshots(problem, 20, 16), problem.space, {});
  const RomPrediction p = predict(model, Eigen::Vector3d(1.2, 0.0, -0.5));
  EXPECT_TRUE(p.out_of_bounds);
  EXPECT_TRUE(p.field.allFinite());
  EXPECT_FALSE(predict(model, Eigen::Vector3d(1.0, 0.0, -1.0)).out_of_bounds);
}

TEST(Predict, RejectsBadParameters) {
  const SyntheticProblem problem = make_ridge_problem(3, 50, 2, 17);
  const RomModel model = train(problem_snapshots(problem, 10, 18), problem.space, {});
  EXPECT_THROW(predict(model, Eigen::Vector2d(0.0, 0.0)), InvalidArgument);
  EXPECT_THROW(predict(model, Eigen::Vector3d(0.0, NAN, 0.0)), InvalidArgument);
}

TEST(RelativeError, HandComputed) {
  const Eigen::Vector2d exact(3, 4);
  EXPECT_EQ(relative_error(exact, exact), 0.0);
  EXPECT_DOUBLE_EQ(relative_error(exact, Eigen::Vector2d::Zero()), 1.0);
  EXPECT_DOUBLE_EQ(relative_error(exact, Eigen::Vector2d(3, 0)), 0.8);
  EXPECT_THROW(relative_error(Eigen::Vector2d::Zero(), exact), Undefined);
  EXPECT_THROW(relative_error(exact, Eigen::Vector3d::Zero()), InvalidArgument);
}

class ArchiveRoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(ArchiveRoundTrip, PredictionsAreBitwiseIdentical) {
  const PresetInfo info = make_preset(Preset::PressureProxy);
  const SnapshotSet data = problem_snapshots(info.problem, 30, 19);
  RomConfig config;
  FieldJacobianFn jac;
  switch (GetParam()) {
    case 0:
      config = {EnergyFraction{0.999}, FullRbfMethod{}};
      break;
    case 1:
      config = {FixedRank{5}, FullRbfMethod{RbfKernel::gaussian(2.0)}, true};
      break;
    case 2:
      config = {FixedRank{9}, AsGprMethod{GradientMethod::Analytic}};
      jac = info.problem.jacobian();
      break;
    default:
      config = {FixedRank{4}, AsGprMethod{GradientMethod::GlobalLinear}, true};
  }
  const RomModel model = train(data, info.problem.space, config, jac, 42);
  std::stringstream buf;
  save_model(buf, model);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 6), "ROMAS1");
  std::stringstream in(bytes);
  const RomModel loaded = load_model(in);
  EXPECT_EQ(loaded.info.config, model.info.config);
  EXPECT_EQ(loaded.info.n_train, 30);
  EXPECT_EQ(loaded.info.seed, 42u);
  const ParameterSamples probe = sample_uniform(info.problem.space, 10, 20);
  for (Eigen::Index j = 0; j < probe.count(); ++j)
    EXPECT_TRUE(bitwise_equal(predict(model, probe.values.col(j)).field, predict(loaded, probe.values.col(j)).field));
  std::stringstream again;
  save_model(again, loaded);
  EXPECT_EQ(again.str(), bytes);
}

INSTANTIATE_TEST_SUITE_P(Configs, ArchiveRoundTrip, ::testing::Values(0, 1, 2, 3));

TEST(Archive, RejectsCorruptInput) {
  std::stringstream bad("ROMAS2........");
  EXPECT_THROW(load_model(bad), InvalidArgument);
  const SyntheticProblem problem = make_ridge_problem(2, 20, 1, 21);
  std::stringstream buf;
  save_model(buf, train(problem_snapshots(problem, 6, 22), problem.space, {}));
  std::stringstream truncated(buf.str().substr(0, buf.str().size() / 2));
  EXPECT_THROW(load_model(truncated), InvalidArgument);
}

}  // namespace
}  // namespace podas
