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

// Independent reference computations used only by the tests. None of these
// call into the library code paths they are used to check.

#ifndef PODAS_TESTS_ORACLES_HPP
#define PODAS_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace podas::oracle {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  return m;
}

inline Eigen::MatrixXd random_uniform(Eigen::Index rows, Eigen::Index cols, double lo, double hi,
                                      std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(gen);
  return m;
}

/// Frobenius norm by explicit summation of squares.
inline double frobenius(const Eigen::MatrixXd& a) {
  long double s = 0.0L;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += static_cast<long double>(a(i, j)) * a(i, j);
  return static_cast<double>(std::sqrt(s));
}

/// Spectral norm via power iteration on A^T A, deflation-free.
inline double spectral_norm(const Eigen::MatrixXd& a, int iterations = 2000) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += 0.01 * static_cast<double>(i % 7);
  double prev = 0.0, est = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    est = std::sqrt(nw);
    if (it > 20 && std::abs(est - prev) <= 1e-15 * est) break;
    prev = est;
  }
  return (a * v).norm();
}

/// Average of outer products, accumulated one column at a time.
inline Eigen::MatrixXd mean_outer(const Eigen::MatrixXd& g) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g.rows(), g.rows());
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index a = 0; a < g.rows(); ++a)
      for (Eigen::Index b = 0; b < g.rows(); ++b) s(a, b) += g(a, j) * g(b, j);
  return s / static_cast<double>(g.cols());
}

/// Central finite-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// GP log marginal likelihood with a dense LU solve and determinant.
inline double dense_lml(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double ell, double sf2,
                        double sn2, double mean = 0.0) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k(i, j) = sf2 * std::exp(-0.5 * (x[i] - x[j]) * (x[i] - x[j]) / (ell * ell)) + (i == j ? sn2 : 0.0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
  const Eigen::VectorXd r = y.array() - mean;
  return -0.5 * r.dot(lu.solve(r)) - 0.5 * std::log(lu.determinant()) -
         0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

/// Dense GP posterior mean at xs.
inline double dense_gp_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double ell, double sf2,
                            double sn2, double mean, double xs) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd k(n, n);
  Eigen::VectorXd ks(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ks[i] = sf2 * std::exp(-0.5 * (xs - x[i]) * (xs - x[i]) / (ell * ell));
    for (Eigen::Index j = 0; j < n; ++j)
      k(i, j) = sf2 * std::exp(-0.5 * (x[i] - x[j]) * (x[i] - x[j]) / (ell * ell)) + (i == j ? sn2 : 0.0);
  }
  const Eigen::VectorXd r = y.array() - mean;
  return mean + ks.dot(k.fullPivLu().solve(r));
}

/// Coefficient of determination of predictions against targets.
inline double r_squared(const Eigen::VectorXd& y, const Eigen::VectorXd& pred) {
  const double ss_res = (y - pred).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  return 1.0 - ss_res / ss_tot;
}

}  // namespace podas::oracle

#endif  // PODAS_TESTS_ORACLES_HPP
