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

#ifndef PODAS_ACTIVE_SUBSPACE_HPP
#define PODAS_ACTIVE_SUBSPACE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "podas/errors.hpp"
#include "podas/gpr.hpp"
#include "podas/param_space.hpp"

namespace podas {

enum class GradientMethod { Analytic, LocalLinear, GlobalLinear };

inline const char* to_string(GradientMethod m) {
  switch (m) {
    case GradientMethod::Analytic:
      return "analytic";
    case GradientMethod::LocalLinear:
      return "local-linear";
    case GradientMethod::GlobalLinear:
      return "global-linear";
  }
  return "?";
}

/// Gradient of a scalar function at a reference-frame point.
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GradientStrategy {
  GradientMethod method = GradientMethod::LocalLinear;
  GradientFn analytic;  // required for Analytic
};

/// p x n gradient samples in reference coordinates.
struct GradientSamples {
  Eigen::MatrixXd values;
  GradientMethod method = GradientMethod::Analytic;
  std::vector<bool> fell_back;  // LocalLinear samples replaced by the global fit

  Eigen::Index count() const { return values.cols(); }
};

namespace detail {

// Least-squares slope of f ~ a + g^T (x - origin) over the given columns.
// Returns false when the design matrix is rank deficient.
inline bool linear_slope(const Eigen::MatrixXd& x, const Eigen::VectorXd& f,
                         const std::vector<Eigen::Index>& cols, const Eigen::VectorXd& origin,
                         Eigen::VectorXd& slope) {
  const Eigen::Index p = x.rows();
  const auto m = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd a(m, p + 1);
  Eigen::VectorXd b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    a(r, 0) = 1.0;
    a.row(r).tail(p) = (x.col(cols[r]) - origin).transpose();
    b[r] = f[cols[r]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < p + 1) return false;
  slope = qr.solve(b).tail(p);
  return true;
}

}  // namespace detail

/// Gradients of f at each sample column. Samples must be in the reference frame.
inline GradientSamples estimate_gradients(const ParameterSamples& samples_ref,
                                          const Eigen::Ref<const Eigen::VectorXd>& values,
                                          const GradientStrategy& strategy) {
  if (samples_ref.frame != Frame::Reference)
    throw InvalidArgument("gradient estimation works in reference coordinates");
  const Eigen::MatrixXd& x = samples_ref.values;
  const Eigen::Index p = x.rows();
  const Eigen::Index n = x.cols();
  if (values.size() != n) throw InvalidArgument("value count does not match sample count");
  if (n < 1) throw InvalidArgument("need at least one sample");
  if (!values.allFinite()) throw InvalidArgument("non-finite function values");

  GradientSamples out;
  out.method = strategy.method;
  out.values.resize(p, n);
  out.fell_back.assign(static_cast<std::size_t>(n), false);

  if (strategy.method == GradientMethod::Analytic) {
    if (!strategy.analytic) throw InvalidArgument("analytic gradient strategy needs a gradient function");
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd g = strategy.analytic(x.col(j));
      if (g.size() != p) throw InvalidArgument("analytic gradient has wrong length");
      out.values.col(j) = g;
    }
    if (!out.values.allFinite()) throw InvalidArgument("analytic gradients are non-finite");
    return out;
  }

  if (n < p + 1)
    throw InvalidArgument("linear gradient estimation needs at least p + 1 = " +
                          std::to_string(p + 1) + " samples");
  const Eigen::VectorXd f = values;
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});

  Eigen::VectorXd global;
  const bool global_ok = detail::linear_slope(x, f, all, Eigen::VectorXd::Zero(p), global);

  if (strategy.method == GradientMethod::GlobalLinear) {
    if (!global_ok) throw InvalidArgument("global linear fit is rank deficient");
    out.values = global.replicate(1, n);
    return out;
  }

  const Eigen::Index m = std::min(n, 2 * (p + 1));
  std::vector<Eigen::Index> order(all.size());
  std::vector<double> dist(all.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) dist[static_cast<std::size_t>(i)] = (x.col(i) - x.col(j)).squaredNorm();
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    });
    std::vector<Eigen::Index> nearest(order.begin(), order.begin() + m);
    Eigen::VectorXd slope;
    if (detail::linear_slope(x, f, nearest, x.col(j), slope)) {
      out.values.col(j) = slope;
    } else {
      if (!global_ok) throw InvalidArgument("local and global linear fits are rank deficient");
      out.values.col(j) = global;
      out.fell_back[static_cast<std::size_t>(j)] = true;
    }
  }
  return out;
}

/// Uncentred gradient covariance (1/n) G G^T.
inline Eigen::MatrixXd covariance(const GradientSamples& grads) {
  if (grads.count() < 1) throw InvalidArgument("covariance needs at least one gradient");
  return grads.values * grads.values.transpose() / static_cast<double>(grads.count());
}

struct Eigenpairs {
  Eigen::VectorXd values;   // descending, clamped non-negative
  Eigen::MatrixXd vectors;  // orthogonal, columns match `values`
};

/// Symmetric eigendecomposition sorted descending. Each eigenvector is
/// flipped so that its largest-magnitude entry is positive.
inline Eigenpairs eigendecompose(const Eigen::Ref<const Eigen::MatrixXd>& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
    throw InvalidArgument("eigendecomposition needs a non-empty square matrix");
  if (!sigma.allFinite()) throw InvalidArgument("matrix has non-finite entries");
  const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

  const Eigen::Index p = sym.rows();
  Eigenpairs out{es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
  const double top = std::max(out.values[0], 0.0);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (out.values[i] < 0.0) {
      if (out.values[i] < -1e-12 * top && top > 0.0)
        throw InvalidArgument("matrix is not positive semidefinite (eigenvalue " +
                              std::to_string(out.values[i]) + ")");
      out.values[i] = 0.0;
    }
    Eigen::Index imax = 0;
    out.vectors.col(i).cwiseAbs().maxCoeff(&imax);
    if (out.vectors(imax, i) < 0.0) out.vectors.col(i) *= -1.0;
  }
  return out;
}

/// Active dimension at the largest log-gap between consecutive eigenvalues.
inline Eigen::Index select_dimension(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues) {
  const Eigen::Index p = eigenvalues.size();
  if (p < 2) throw InvalidArgument("dimension selection needs p >= 2");
  const double top = eigenvalues[0];
  if (!(top > 0.0)) throw NoActiveSubspace("all eigenvalues are zero");
  const double delta = 1e-16 * top;
  Eigen::Index best = 1;
  double best_gap = -INFINITY;
  for (Eigen::Index i = 0; i + 1 < p; ++i) {
    const double gap = std::log10(eigenvalues[i] + delta) - std::log10(eigenvalues[i + 1] + delta);
    if (gap > best_gap) {
      best_gap = gap;
      best = i + 1;
    }
  }
  return best;
}

/// Eigenpairs of the gradient covariance together with the active/inactive split.
class ActiveSubspace {
 public:
  ActiveSubspace() = default;
  ActiveSubspace(Eigenpairs pairs, Eigen::Index active_dim)
      : pairs_(std::move(pairs)), active_dim_(active_dim) {
    const Eigen::Index p = pairs_.values.size();
    if (pairs_.vectors.rows() != p || pairs_.vectors.cols() != p)
      throw InvalidArgument("eigenvector matrix must be p x p");
    if (active_dim_ < 1 || (p > 1 && active_dim_ > p - 1) || (p == 1 && active_dim_ != 1))
      throw InvalidArgument("active dimension " + std::to_string(active_dim_) + " out of range");
  }

  Eigen::Index dim() const { return pairs_.values.size(); }
  Eigen::Index active_dim() const { return active_dim_; }
  const Eigen::VectorXd& eigenvalues() const { return pairs_.values; }
  const Eigen::MatrixXd& eigenvectors() const { return pairs_.vectors; }
  Eigen::MatrixXd w1() const { return pairs_.vectors.leftCols(active_dim_); }
  Eigen::MatrixXd w2() const { return pairs_.vectors.rightCols(dim() - active_dim_); }

 private:
  Eigenpairs pairs_;
  Eigen::Index active_dim_ = 1;
};

/// Eigendecomposes the covariance of `grads`; active_dim 0 picks it by spectral gap.
inline ActiveSubspace compute_active_subspace(const GradientSamples& grads,
                                              Eigen::Index active_dim = 0) {
  Eigenpairs pairs = eigendecompose(covariance(grads));
  if (!(pairs.values[0] > 0.0))
    throw NoActiveSubspace("gradient covariance is zero; eigenvalues all vanish");
  if (active_dim == 0) active_dim = pairs.values.size() > 1 ? select_dimension(pairs.values) : 1;
  return ActiveSubspace(std::move(pairs), active_dim);
}

/// W1^T mu for one point (vector) or many (columns).
inline Eigen::MatrixXd project_active(const ActiveSubspace& as,
                                      const Eigen::Ref<const Eigen::MatrixXd>& mu_ref) {
  if (mu_ref.rows() != as.dim()) throw InvalidArgument("point dimension mismatch");
  return as.w1().transpose() * mu_ref;
}

inline Eigen::MatrixXd project_inactive(const ActiveSubspace& as,
                                        const Eigen::Ref<const Eigen::MatrixXd>& mu_ref) {
  if (mu_ref.rows() != as.dim()) throw InvalidArgument("point dimension mismatch");
  return as.w2().transpose() * mu_ref;
}

struct TailDiagnostic {
  double active_sum_sqrt = 0.0;
  double inactive_sum_sqrt = 0.0;
};

/// Square roots of the active and inactive eigenvalue sums entering the
/// response-surface RMSE bound. The bound's constants are not estimated.
inline TailDiagnostic eigenvalue_tail_diagnostic(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                                                 Eigen::Index active_dim) {
  const Eigen::Index p = eigenvalues.size();
  if (active_dim < 0 || active_dim > p) throw InvalidArgument("active dimension out of range");
  return {std::sqrt(eigenvalues.head(active_dim).sum()),
          std::sqrt(eigenvalues.tail(p - active_dim).sum())};
}

/// One-dimensional ridge approximation f(mu) ~ g(w1^T mu).
class AsRidgeModel {
 public:
  AsRidgeModel() = default;
  AsRidgeModel(ActiveSubspace subspace, GpModel1d response)
      : subspace_(std::move(subspace)), response_(std::move(response)), w1_(subspace_.w1().col(0)) {
    if (subspace_.active_dim() != 1) throw InvalidArgument("ridge model requires active dimension 1");
  }

  const ActiveSubspace& subspace() const { return subspace_; }
  const GpModel1d& response() const { return response_; }
  const Eigen::VectorXd& direction() const { return w1_; }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& mu_ref) const {
    if (mu_ref.size() != w1_.size()) throw InvalidArgument("point dimension mismatch");
    return response_.predict(w1_.dot(mu_ref));
  }

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& mu_ref) const {
    Eigen::VectorXd out(mu_ref.cols());
    for (Eigen::Index j = 0; j < mu_ref.cols(); ++j) out[j] = (*this)(mu_ref.col(j));
    return out;
  }

 private:
  ActiveSubspace subspace_;
  GpModel1d response_;
  Eigen::VectorXd w1_;
};

/// Trains the 1-D response on (w1^T mu_i, f_i) for a given subspace.
inline AsRidgeModel fit_ridge_on_subspace(ActiveSubspace subspace, const ParameterSamples& samples_ref,
                                          const Eigen::Ref<const Eigen::VectorXd>& values,
                                          const GpOptions& gp = {}) {
  if (samples_ref.frame != Frame::Reference)
    throw InvalidArgument("ridge fit works in reference coordinates");
  const Eigen::VectorXd t = subspace.w1().col(0).transpose() * samples_ref.values;
  GpModel1d response = gpr_fit(t, values, gp);
  return AsRidgeModel(std::move(subspace), std::move(response));
}

/// Ridge fit from precomputed gradients; the active dimension is forced to 1.
inline AsRidgeModel fit_as_ridge(const ParameterSamples& samples_ref,
                                 const Eigen::Ref<const Eigen::VectorXd>& values,
                                 const GradientSamples& grads, const GpOptions& gp = {}) {
  if (grads.count() != samples_ref.count())
    throw InvalidArgument("gradient count does not match sample count");
  Eigenpairs pairs = eigendecompose(covariance(grads));
  if (!(pairs.values[0] > 0.0)) {
    std::string diag = "eigenvalues:";
    for (Eigen::Index i = 0; i < pairs.values.size(); ++i) diag += " " + std::to_string(pairs.values[i]);
    throw NoActiveSubspace("degenerate gradient covariance; " + diag);
  }
  return fit_ridge_on_subspace(ActiveSubspace(std::move(pairs), 1), samples_ref, values, gp);
}

inline AsRidgeModel fit_as_ridge(const ParameterSamples& samples_ref,
                                 const Eigen::Ref<const Eigen::VectorXd>& values,
                                 const GradientStrategy& strategy, const GpOptions& gp = {}) {
  const Eigen::Index p = samples_ref.dim();
  if (samples_ref.count() < p + 2)
    throw InvalidArgument("ridge fit needs at least p + 2 = " + std::to_string(p + 2) + " samples");
  return fit_as_ridge(samples_ref, values, estimate_gradients(samples_ref, values, strategy), gp);
}

struct SummaryRow {
  double active = 0.0;
  double value = 0.0;
};

/// (w1^T mu_i, f_i) pairs sorted by the active coordinate.
inline std::vector<SummaryRow> sufficient_summary(const ParameterSamples& samples_ref,
                                                  const Eigen::Ref<const Eigen::VectorXd>& values,
                                                  const ActiveSubspace& subspace) {
  if (samples_ref.frame != Frame::Reference)
    throw InvalidArgument("sufficient summary works in reference coordinates");
  if (values.size() != samples_ref.count()) throw InvalidArgument("value count does not match sample count");
  const Eigen::VectorXd t = subspace.w1().col(0).transpose() * samples_ref.values;
  std::vector<SummaryRow> rows(static_cast<std::size_t>(t.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) rows[static_cast<std::size_t>(i)] = {t[i], values[i]};
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) { return a.active < b.active; });
  return rows;
}

}  // namespace podas

#endif  // PODAS_ACTIVE_SUBSPACE_HPP
