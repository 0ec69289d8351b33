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

#ifndef PODAS_POD_HPP
#define PODAS_POD_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "podas/errors.hpp"
#include "podas/param_space.hpp"

namespace podas {

/// Field snapshots (one per column) paired with the parameters that produced them.
class SnapshotSet {
 public:
  SnapshotSet(Eigen::MatrixXd fields, ParameterSamples params)
      : fields_(std::move(fields)), params_(std::move(params)) {
    if (fields_.cols() != params_.count())
      throw InvalidArgument("snapshot count " + std::to_string(fields_.cols()) +
                            " does not match parameter sample count " +
                            std::to_string(params_.count()));
    if (!fields_.allFinite()) throw InvalidArgument("snapshot matrix has non-finite entries");
  }

  const Eigen::MatrixXd& fields() const { return fields_; }
  const ParameterSamples& params() const { return params_; }
  Eigen::Index dofs() const { return fields_.rows(); }
  Eigen::Index count() const { return fields_.cols(); }

  /// Subset of snapshots in the order given by `indices`.
  template <typename IndexRange>
  SnapshotSet select(const IndexRange& indices) const {
    const auto m = static_cast<Eigen::Index>(std::size(indices));
    Eigen::MatrixXd f(dofs(), m);
    ParameterSamples p{Eigen::MatrixXd(params_.dim(), m), params_.frame};
    Eigen::Index c = 0;
    for (auto idx : indices) {
      const auto j = static_cast<Eigen::Index>(idx);
      f.col(c) = fields_.col(j);
      p.values.col(c) = params_.values.col(j);
      ++c;
    }
    return SnapshotSet(std::move(f), std::move(p));
  }

 private:
  Eigen::MatrixXd fields_;
  ParameterSamples params_;
};

/// Truncated POD basis. `singular_values` always holds the full spectrum.
struct PodBasis {
  Eigen::MatrixXd modes;            // N x k, orthonormal columns
  Eigen::VectorXd singular_values;  // descending, length min(N, Ns)
  bool centered = false;
  Eigen::VectorXd mean;  // length N when centered, empty otherwise

  Eigen::Index rank() const { return modes.cols(); }
  Eigen::Index dofs() const { return modes.rows(); }
};

struct PodDecomposition {
  PodBasis basis;
  Eigen::MatrixXd right_factors;  // Ns x min(N, Ns)
};

/// k x Ns matrix of modal coefficients, column i belongs to snapshot i.
using ModalCoefficients = Eigen::MatrixXd;

/// Thin SVD of the snapshot matrix. Each mode is flipped so that its
/// largest-magnitude entry is positive; V is flipped along with it.
inline PodDecomposition compute_pod(const Eigen::Ref<const Eigen::MatrixXd>& snapshots,
                                    bool center = false) {
  if (snapshots.rows() < 1 || snapshots.cols() < 1)
    throw InvalidArgument("snapshot matrix must be non-empty");
  if (!snapshots.allFinite()) throw InvalidArgument("snapshot matrix has non-finite entries");

  PodDecomposition out;
  Eigen::MatrixXd work = snapshots;
  if (center) {
    out.basis.centered = true;
    out.basis.mean = snapshots.rowwise().mean();
    work.colwise() -= out.basis.mean;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.basis.modes = svd.matrixU();
  out.basis.singular_values = svd.singularValues();
  out.right_factors = svd.matrixV();

  for (Eigen::Index j = 0; j < out.basis.modes.cols(); ++j) {
    Eigen::Index imax = 0;
    out.basis.modes.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.basis.modes(imax, j) < 0.0) {
      out.basis.modes.col(j) *= -1.0;
      out.right_factors.col(j) *= -1.0;
    }
  }
  return out;
}

inline PodDecomposition compute_pod(const SnapshotSet& snapshots, bool center = false) {
  return compute_pod(snapshots.fields(), center);
}

struct FixedRank {
  Eigen::Index k;
};
struct EnergyFraction {
  double tau;
};
using TruncationCriterion = std::variant<FixedRank, EnergyFraction>;

/// Smallest k whose cumulative squared singular values reach tau of the total.
inline Eigen::Index rank_for_energy(const Eigen::VectorXd& singular_values, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("energy fraction must lie in (0, 1]");
  const Eigen::Index n = singular_values.size();
  const double total = singular_values.squaredNorm();
  if (total == 0.0) return 1;
  // Slack of a few ulps per term so tau = 1 lands on the numerical rank.
  const double target =
      tau * total * (1.0 - 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n));
  double cum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += singular_values[i] * singular_values[i];
    if (cum >= target) return i + 1;
  }
  return n;
}

inline PodBasis truncate(const PodBasis& basis, const TruncationCriterion& criterion) {
  const Eigen::Index available = basis.rank();
  Eigen::Index k = 0;
  if (const auto* fixed = std::get_if<FixedRank>(&criterion)) {
    k = fixed->k;
    if (k < 1 || k > available)
      throw InvalidArgument("rank " + std::to_string(k) + " outside [1, " +
                            std::to_string(available) + "]");
  } else {
    k = std::min(rank_for_energy(basis.singular_values, std::get<EnergyFraction>(criterion).tau),
                 available);
  }
  PodBasis out = basis;
  out.modes = basis.modes.leftCols(k);
  return out;
}

struct TruncationError {
  double spectral = 0.0;
  double frobenius = 0.0;
};

/// Error of the rank-k truncation in the spectral and Frobenius norms.
inline TruncationError truncation_error(const Eigen::VectorXd& singular_values, Eigen::Index k) {
  const Eigen::Index n = singular_values.size();
  if (k < 0 || k > n)
    throw InvalidArgument("rank " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  TruncationError e;
  if (k == n) return e;
  e.spectral = singular_values[k];
  e.frobenius = singular_values.tail(n - k).norm();
  return e;
}

inline ModalCoefficients project(const PodBasis& basis,
                                 const Eigen::Ref<const Eigen::MatrixXd>& fields) {
  if (fields.rows() != basis.dofs())
    throw InvalidArgument("field length " + std::to_string(fields.rows()) +
                          " does not match basis length " + std::to_string(basis.dofs()));
  if (basis.centered) return basis.modes.transpose() * (fields.colwise() - basis.mean);
  return basis.modes.transpose() * fields;
}

inline ModalCoefficients project(const PodBasis& basis, const SnapshotSet& snapshots) {
  return project(basis, snapshots.fields());
}

/// Linear combination of the modes; accepts a k-vector or a k x m matrix.
inline Eigen::MatrixXd reconstruct(const PodBasis& basis,
                                   const Eigen::Ref<const Eigen::MatrixXd>& coefficients) {
  if (coefficients.rows() != basis.rank())
    throw InvalidArgument("coefficient rows " + std::to_string(coefficients.rows()) +
                          " do not match basis rank " + std::to_string(basis.rank()));
  Eigen::MatrixXd out = basis.modes * coefficients;
  if (basis.centered) out.colwise() += basis.mean;
  return out;
}

/// Singular values divided by the largest one.
inline Eigen::VectorXd singular_value_decay(const Eigen::VectorXd& singular_values) {
  if (singular_values.size() == 0) throw InvalidArgument("empty singular value vector");
  if (singular_values[0] == 0.0) throw Undefined("largest singular value is zero");
  return singular_values / singular_values[0];
}

inline Eigen::VectorXd singular_value_decay(const PodBasis& basis) {
  return singular_value_decay(basis.singular_values);
}

}  // namespace podas

#endif  // PODAS_POD_HPP
