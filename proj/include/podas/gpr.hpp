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

#ifndef PODAS_GPR_HPP
#define PODAS_GPR_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "podas/errors.hpp"

namespace podas {

/// Squared-exponential hyperparameters. `noise_variance` is the full
/// diagonal jitter and is never allowed below the nugget floor.
struct GpHyperparameters {
  double length_scale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 0.0;
};

/// Candidate set for marginal-likelihood maximisation.
struct GpGrid {
  double length_min_factor = 1e-2;  // times the input range
  double length_max_factor = 10.0;
  int length_count = 25;
  std::vector<double> noise_factors{0.0, 1e-6, 1e-4, 1e-2};  // times sigma_f^2; 0 = floor
};

/// Relative nugget always present on the diagonal.
inline constexpr double kNuggetFloor = 1e-10;

enum class PriorMean { Zero, SampleMean };

struct GpOptions {
  std::optional<GpHyperparameters> fixed;  // empty: optimise over `grid`
  GpGrid grid;
  PriorMean prior_mean = PriorMean::SampleMean;
};

/// Compact grid echo, e.g. "ell[0.01R:10R:25]/noise[floor|1e-06|0.0001|0.01]".
/// R is the training-input range; noise factors multiply var(y).
inline std::string describe(const GpGrid& g) {
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  std::string s = "ell[" + num(g.length_min_factor) + "R:" + num(g.length_max_factor) + "R:" +
                  std::to_string(g.length_count) + "]/noise[";
  for (std::size_t i = 0; i < g.noise_factors.size(); ++i) {
    if (i) s += "|";
    s += g.noise_factors[i] == 0.0 ? std::string("floor") : num(g.noise_factors[i]);
  }
  return s + "]";
}

/// One-dimensional GP regressor; only the posterior mean is exposed.
class GpModel1d {
 public:
  GpModel1d() = default;

  /// Builds the model on already-deduplicated training data.
  GpModel1d(Eigen::VectorXd x, Eigen::VectorXd y, GpHyperparameters hyper, double prior_mean)
      : x_(std::move(x)), y_(std::move(y)), hyper_(hyper), prior_mean_(prior_mean) {
    if (x_.size() != y_.size() || x_.size() < 1)
      throw InvalidArgument("GP needs matching, non-empty training vectors");
    if (!(hyper_.length_scale > 0.0) || !(hyper_.signal_variance > 0.0) ||
        !(hyper_.noise_variance >= 0.0))
      throw InvalidArgument("GP hyperparameters must satisfy l > 0, sf2 > 0, sn2 >= 0");
    hyper_.noise_variance = std::max(hyper_.noise_variance, kNuggetFloor * hyper_.signal_variance);
    factorize();
  }

  const Eigen::VectorXd& train_x() const { return x_; }
  const Eigen::VectorXd& train_y() const { return y_; }
  const GpHyperparameters& hyperparameters() const { return hyper_; }
  double prior_mean() const { return prior_mean_; }

  double kernel(double a, double b) const {
    const double d = (a - b) / hyper_.length_scale;
    return hyper_.signal_variance * std::exp(-0.5 * d * d);
  }

  Eigen::MatrixXd covariance_matrix() const {
    const Eigen::Index n = x_.size();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel(x_[i], x_[j]);
    }
    k.diagonal().array() += hyper_.noise_variance;
    return k;
  }

  double predict(double xs) const {
    double s = prior_mean_;
    for (Eigen::Index i = 0; i < x_.size(); ++i) s += kernel(xs, x_[i]) * alpha_[i];
    return s;
  }

  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& xs) const {
    Eigen::VectorXd out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = predict(xs[i]);
    return out;
  }

  /// log p(y | x) for the centred targets.
  double log_marginal_likelihood() const {
    const Eigen::VectorXd r = y_.array() - prior_mean_;
    const double log_det = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
    return -0.5 * r.dot(alpha_) - 0.5 * log_det -
           0.5 * static_cast<double>(x_.size()) * std::log(2.0 * M_PI);
  }

  /// Smallest diagonal entry of the Cholesky factor.
  double min_cholesky_pivot() const {
    return llt_.matrixLLT().diagonal().minCoeff();
  }

 private:
  void factorize() {
    llt_.compute(covariance_matrix());
    if (llt_.info() != Eigen::Success)
      throw NumericalError("GP covariance matrix is not positive definite");
    alpha_ = llt_.solve((y_.array() - prior_mean_).matrix());
  }

  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
  GpHyperparameters hyper_;
  double prior_mean_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

namespace detail {

// Sorts by abscissa and averages targets whose abscissae coincide.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> merge_duplicates(
    const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });
  std::vector<double> mx, my;
  std::vector<int> counts;
  for (Eigen::Index idx : order) {
    const double xi = x[idx];
    if (!mx.empty() && std::abs(xi - mx.back()) <= 1e-12 * std::max(1.0, std::abs(xi))) {
      my.back() += y[idx];
      ++counts.back();
    } else {
      mx.push_back(xi);
      my.push_back(y[idx]);
      counts.push_back(1);
    }
  }
  Eigen::VectorXd ox(static_cast<Eigen::Index>(mx.size())), oy(ox.size());
  for (std::size_t i = 0; i < mx.size(); ++i) {
    ox[static_cast<Eigen::Index>(i)] = mx[i];
    oy[static_cast<Eigen::Index>(i)] = my[i] / counts[i];
  }
  return {ox, oy};
}

}  // namespace detail

/// Fits a GP posterior mean to (x, y). With no fixed hyperparameters the
/// length scale and noise level maximise the log marginal likelihood over
/// the grid; ties keep the earliest candidate.
inline GpModel1d gpr_fit(const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y, const GpOptions& options = {}) {
  if (x.size() != y.size()) throw InvalidArgument("GP fit: x and y differ in length");
  if (x.size() < 1) throw InvalidArgument("GP fit needs at least one point");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("GP fit: non-finite input");
  if (!options.fixed && x.size() < 2)
    throw InvalidArgument("GP hyperparameter optimisation needs at least two points");

  auto [mx, my] = detail::merge_duplicates(x, y);
  const double mean = options.prior_mean == PriorMean::SampleMean ? my.mean() : 0.0;

  if (options.fixed) return GpModel1d(mx, my, *options.fixed, mean);

  const double var = my.size() > 1 ? (my.array() - my.mean()).square().sum() /
                                         static_cast<double>(my.size() - 1)
                                   : 0.0;
  const double signal = var > 0.0 ? var : 1.0;
  double range = mx.maxCoeff() - mx.minCoeff();
  if (!(range > 0.0)) range = 1.0;

  const GpGrid& grid = options.grid;
  const double lo = std::log(grid.length_min_factor * range);
  const double hi = std::log(grid.length_max_factor * range);
  std::optional<GpModel1d> best;
  double best_lml = -INFINITY;
  for (int i = 0; i < grid.length_count; ++i) {
    const double t = grid.length_count > 1 ? static_cast<double>(i) / (grid.length_count - 1) : 0.0;
    const double ell = std::exp(lo + t * (hi - lo));
    for (double factor : grid.noise_factors) {
      GpHyperparameters h{ell, signal, factor * signal};
      try {
        GpModel1d candidate(mx, my, h, mean);
        const double lml = candidate.log_marginal_likelihood();
        if (std::isfinite(lml) && lml > best_lml) {
          best_lml = lml;
          best = std::move(candidate);
        }
      } catch (const NumericalError&) {
        // candidate not positive definite; skip
      }
    }
  }
  if (!best) throw NumericalError("GP fit: no grid candidate produced a positive definite kernel");
  return *best;
}

inline Eigen::VectorXd gpr_predict_mean(const GpModel1d& model,
                                        const Eigen::Ref<const Eigen::VectorXd>& xs) {
  return model.predict(xs);
}

inline double gpr_log_marginal_likelihood(const GpModel1d& model) {
  return model.log_marginal_likelihood();
}

}  // namespace podas

#endif  // PODAS_GPR_HPP
