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

#ifndef PODAS_RBF_HPP
#define PODAS_RBF_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include "podas/errors.hpp"

namespace podas {

enum class RbfKernelType { ThinPlateSpline, Gaussian, Multiquadric };

struct RbfKernel {
  RbfKernelType type = RbfKernelType::ThinPlateSpline;
  double shape = 1.0;  // unused by ThinPlateSpline

  static RbfKernel thin_plate() { return {}; }
  static RbfKernel gaussian(double eps) { return {RbfKernelType::Gaussian, eps}; }
  static RbfKernel multiquadric(double eps) { return {RbfKernelType::Multiquadric, eps}; }

  double operator()(double r) const {
    switch (type) {
      case RbfKernelType::ThinPlateSpline:
        return r > 0.0 ? r * r * std::log(r) : 0.0;
      case RbfKernelType::Gaussian:
        return std::exp(-(shape * r) * (shape * r));
      case RbfKernelType::Multiquadric:
        return std::sqrt(1.0 + (shape * r) * (shape * r));
    }
    return 0.0;
  }
};

/// Degree of the polynomial appended to the radial expansion.
enum class PolynomialTail { None = -1, Constant = 0, Linear = 1 };

inline const char* to_string(RbfKernelType t) {
  switch (t) {
    case RbfKernelType::ThinPlateSpline:
      return "thin-plate";
    case RbfKernelType::Gaussian:
      return "gaussian";
    case RbfKernelType::Multiquadric:
      return "multiquadric";
  }
  return "?";
}

/// Scattered-data interpolant s(x) = sum_i w_i phi(|x - c_i|) + q(x).
class RbfInterpolant {
 public:
  RbfInterpolant() = default;

  /// Reassembles a fitted interpolant from stored coefficients.
  RbfInterpolant(Eigen::MatrixXd centers, Eigen::VectorXd weights, Eigen::VectorXd tail,
                 RbfKernel kernel, PolynomialTail tail_degree)
      : centers_(std::move(centers)),
        weights_(std::move(weights)),
        tail_(std::move(tail)),
        kernel_(kernel),
        tail_degree_(tail_degree) {
    if (weights_.size() != centers_.cols() || tail_.size() != tail_size(tail_degree_, dim()))
      throw InvalidArgument("inconsistent RBF coefficient sizes");
  }

  Eigen::Index dim() const { return centers_.rows(); }
  Eigen::Index size() const { return centers_.cols(); }
  const Eigen::MatrixXd& centers() const { return centers_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& tail() const { return tail_; }
  const RbfKernel& kernel() const { return kernel_; }
  PolynomialTail tail_degree() const { return tail_degree_; }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dim())
      throw InvalidArgument("query dimension " + std::to_string(x.size()) +
                            " does not match interpolant dimension " + std::to_string(dim()));
    double s = 0.0;
    for (Eigen::Index i = 0; i < size(); ++i) s += weights_[i] * kernel_((x - centers_.col(i)).norm());
    if (tail_degree_ >= PolynomialTail::Constant) s += tail_[0];
    if (tail_degree_ == PolynomialTail::Linear) s += tail_.tail(dim()).dot(x);
    return s;
  }

  /// One value per column of `xs`.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& xs) const {
    Eigen::VectorXd out(xs.cols());
    for (Eigen::Index j = 0; j < xs.cols(); ++j) out[j] = (*this)(xs.col(j));
    return out;
  }

  static Eigen::Index tail_size(PolynomialTail degree, Eigen::Index dim) {
    switch (degree) {
      case PolynomialTail::None:
        return 0;
      case PolynomialTail::Constant:
        return 1;
      case PolynomialTail::Linear:
        return dim + 1;
    }
    return 0;
  }

 private:
  Eigen::MatrixXd centers_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd tail_;
  RbfKernel kernel_;
  PolynomialTail tail_degree_ = PolynomialTail::None;
};

namespace detail {

inline Eigen::MatrixXd polynomial_block(const Eigen::MatrixXd& x, PolynomialTail degree) {
  const Eigen::Index t = RbfInterpolant::tail_size(degree, x.rows());
  Eigen::MatrixXd p(x.cols(), t);
  if (t == 0) return p;
  p.col(0).setOnes();
  if (degree == PolynomialTail::Linear) p.rightCols(x.rows()) = x.transpose();
  return p;
}

// Highest degree <= requested whose polynomial block has full column rank.
inline PolynomialTail unisolvent_tail(const Eigen::MatrixXd& x, PolynomialTail requested) {
  PolynomialTail degree = requested;
  while (degree == PolynomialTail::Linear) {
    if (x.cols() < x.rows() + 1) {
      degree = PolynomialTail::Constant;
      break;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(polynomial_block(x, degree));
    if (qr.rank() == x.rows() + 1) break;
    degree = PolynomialTail::Constant;
  }
  return degree;
}

}  // namespace detail

/// Default tail is linear for thin-plate splines (conditionally positive
/// definite of order 2) and constant for the others. When the centres
/// cannot determine the requested tail it is lowered to a constant.
inline PolynomialTail default_tail(const RbfKernel& kernel) {
  return kernel.type == RbfKernelType::ThinPlateSpline ? PolynomialTail::Linear
                                                       : PolynomialTail::Constant;
}

inline RbfInterpolant rbf_fit(const Eigen::Ref<const Eigen::MatrixXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              RbfKernel kernel = RbfKernel::thin_plate(),
                              PolynomialTail requested_tail = PolynomialTail::Linear) {
  const Eigen::Index n = x.cols();
  const Eigen::Index d = x.rows();
  if (n < 1) throw InvalidArgument("RBF fit needs at least one centre");
  if (y.size() != n) throw InvalidArgument("RBF fit: value count does not match centre count");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("RBF fit: non-finite input");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if ((x.col(i) - x.col(j)).norm() <= 1e-12)
        throw InvalidArgument("RBF fit: duplicate centres " + std::to_string(i) + " and " +
                              std::to_string(j));
    }
  }

  const Eigen::MatrixXd centers = x;
  const PolynomialTail tail = detail::unisolvent_tail(centers, requested_tail);
  const Eigen::Index t = RbfInterpolant::tail_size(tail, d);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + t, n + t);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      a(i, j) = a(j, i) = kernel((centers.col(i) - centers.col(j)).norm());
    }
  }
  if (t > 0) {
    const Eigen::MatrixXd p = detail::polynomial_block(centers, tail);
    a.topRightCorner(n, t) = p;
    a.bottomLeftCorner(t, n) = p.transpose();
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + t);
  rhs.head(n) = y;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > std::numeric_limits<double>::epsilon()))
    throw IllConditioned("RBF collocation system is singular", rcond > 0.0 ? 1.0 / rcond : INFINITY);
  Eigen::VectorXd sol = lu.solve(rhs);
  // One step of iterative refinement.
  sol += lu.solve(rhs - a * sol);
  if (!sol.allFinite()) throw IllConditioned("RBF collocation solve produced non-finite weights", 1.0 / rcond);

  const double residual = (a * sol - rhs).norm();
  if (residual > 1e-8 * (1.0 + rhs.norm()))
    throw IllConditioned("RBF collocation residual " + std::to_string(residual) +
                             " exceeds tolerance",
                         1.0 / rcond);

  return RbfInterpolant(centers, sol.head(n), sol.tail(t), kernel, tail);
}

inline double rbf_eval(const RbfInterpolant& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model(x);
}

inline Eigen::VectorXd rbf_eval_batch(const RbfInterpolant& model,
                                      const Eigen::Ref<const Eigen::MatrixXd>& xs) {
  return model.evaluate(xs);
}

}  // namespace podas

#endif  // PODAS_RBF_HPP
