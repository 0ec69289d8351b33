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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "podas/rbf.hpp"

namespace podas {
namespace {

TEST(RbfFit, SingleCentreIsConstant) {
  const Eigen::MatrixXd x = Eigen::Vector3d(0.1, -0.2, 0.3);
  const auto model = rbf_fit(x, Eigen::VectorXd::Constant(1, 4.5));
  EXPECT_EQ(model.tail_degree(), PolynomialTail::Constant);
  for (const Eigen::Vector3d q : {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(5, -7, 1), Eigen::Vector3d(0.1, -0.2, 0.3)})
    EXPECT_NEAR(model(q), 4.5, 1e-12);
}

TEST(RbfFit, ThinPlateReproducesLinearFunctions) {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd x = oracle::random_uniform(3, 25, -1, 1, gen);
  const Eigen::Vector3d c(0.7, -1.3, 2.0);
  const Eigen::VectorXd y = (x.transpose() * c).array() + 0.25;
  const auto model = rbf_fit(x, y);
  ASSERT_EQ(model.tail_degree(), PolynomialTail::Linear);
  const Eigen::MatrixXd q = oracle::random_uniform(3, 40, -1, 1, gen);
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    EXPECT_NEAR(model(q.col(j)), c.dot(q.col(j)) + 0.25, 1e-8);
}

TEST(RbfFit, GaussianInterpolatesRandomPoints) {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd x = oracle::random_uniform(2, 10, -1, 1, gen);
  const Eigen::VectorXd y = oracle::random_matrix(10, 1, gen);
  const auto model = rbf_fit(x, y, RbfKernel::gaussian(2.0), PolynomialTail::None);
  for (Eigen::Index i = 0; i < 10; ++i) EXPECT_LE(std::abs(model(x.col(i)) - y[i]), 1e-8 * (1 + std::abs(y[i])));
}

TEST(RbfFit, InterpolationPropertyEveryKernel) {
  std::mt19937_64 gen(3);
  for (const RbfKernel k : {RbfKernel::thin_plate(), RbfKernel::gaussian(1.5), RbfKernel::multiquadric(1.0)}) {
    for (PolynomialTail t : {PolynomialTail::None, PolynomialTail::Constant, PolynomialTail::Linear}) {
      if (k.type == RbfKernelType::ThinPlateSpline && t != PolynomialTail::Linear) continue;
      const Eigen::MatrixXd x = oracle::random_uniform(4, 30, -1, 1, gen);
      const Eigen::VectorXd y = (x.row(0).array() * 3.0).sin().transpose() + x.row(1).transpose().array().square();
      const auto model = rbf_fit(x, y, k, t);
      const Eigen::VectorXd at = model.evaluate(x);
      for (Eigen::Index i = 0; i < y.size(); ++i)
        EXPECT_LE(std::abs(at[i] - y[i]), 1e-8 * (1 + std::abs(y[i]))) << to_string(k.type);
    }
  }
}

TEST(RbfFit, DuplicateCentresRejected) {
  Eigen::MatrixXd x(2, 3);
  x << 0, 1, 0, 0, 1, 0;
  EXPECT_THROW(rbf_fit(x, Eigen::Vector3d(1, 2, 3)), InvalidArgument);
}

TEST(RbfFit, SizeMismatchAndNonFinite) {
  EXPECT_THROW(rbf_fit(Eigen::MatrixXd::Random(2, 4), Eigen::Vector3d(1, 2, 3)), InvalidArgument);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(4);
  y[1] = std::nan("");
  EXPECT_THROW(rbf_fit(Eigen::MatrixXd::Random(2, 4), y), InvalidArgument);
}

TEST(RbfFit, SingularSystemReportsCondition) {
  // Gaussian kernel with a vanishing shape parameter: every entry is 1.
  Eigen::MatrixXd x(1, 3);
  x << 0.0, 0.5, 1.0;
  try {
    rbf_fit(x, Eigen::Vector3d(1, 2, 3), RbfKernel::gaussian(1e-12), PolynomialTail::None);
    FAIL() << "expected IllConditioned";
  } catch (const IllConditioned& e) {
    EXPECT_GT(e.condition(), 1e12);
  }
}

TEST(RbfFit, CollinearCentresLowerTheTail) {
  Eigen::MatrixXd x(2, 4);
  x << 0, 1, 2, 3, 0, 1, 2, 3;  // on a line, linear tail not determined in 2-D
  const auto model = rbf_fit(x, Eigen::Vector4d(0, 1, 4, 9));
  EXPECT_EQ(model.tail_degree(), PolynomialTail::Constant);
  EXPECT_NEAR(model(Eigen::Vector2d(2, 2)), 4.0, 1e-8);
}

TEST(RbfEval, CentresAndFarField) {
  std::mt19937_64 gen(4);
  const Eigen::MatrixXd x = oracle::random_uniform(3, 20, -1, 1, gen);
  const Eigen::VectorXd y = oracle::random_matrix(20, 1, gen);
  const auto model = rbf_fit(x, y);
  EXPECT_NEAR(rbf_eval(model, x.col(7)), y[7], 1e-8 * (1 + std::abs(y[7])));
  for (double r : {1.0, 10.0, 100.0, 1000.0}) {
    const Eigen::MatrixXd far = r * oracle::random_matrix(3, 5, gen).colwise().normalized();
    EXPECT_TRUE(rbf_eval_batch(model, far).allFinite()) << r;
  }
  EXPECT_THROW(model(Eigen::Vector2d(0, 0)), InvalidArgument);
}

}  // namespace
}  // namespace podas
