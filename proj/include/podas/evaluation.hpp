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

#ifndef PODAS_EVALUATION_HPP
#define PODAS_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "podas/errors.hpp"
#include "podas/param_space.hpp"
#include "podas/pod.hpp"
#include "podas/rom.hpp"

namespace podas {

// --- k-fold cross-validation -------------------------------------------------

struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;  // fold id per sample
  std::uint64_t seed = 0;

  std::vector<Eigen::Index> test_indices(int fold) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(static_cast<Eigen::Index>(i));
    return out;
  }

  std::vector<Eigen::Index> train_indices(int fold) const {
    std::vector<Eigen::Index> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] != fold) out.push_back(static_cast<Eigen::Index>(i));
    return out;
  }

  std::vector<Eigen::Index> sizes() const {
    std::vector<Eigen::Index> s(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++s[static_cast<std::size_t>(a)];
    return s;
  }
};

/// Random permutation cut into k contiguous blocks; the first n mod k
/// blocks get one extra sample.
inline FoldPlan kfold_split(Eigen::Index n, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k-fold split needs k >= 2");
  if (static_cast<Eigen::Index>(k) > n)
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds sample count " + std::to_string(n));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 gen(seed);
  std::shuffle(perm.begin(), perm.end(), gen);

  FoldPlan plan{k, std::vector<int>(static_cast<std::size_t>(n), -1), seed};
  const Eigen::Index base = n / k;
  const Eigen::Index extra = n % k;
  std::size_t pos = 0;
  for (int f = 0; f < k; ++f) {
    const Eigen::Index size = base + (f < extra ? 1 : 0);
    for (Eigen::Index i = 0; i < size; ++i) plan.assignments[static_cast<std::size_t>(perm[pos++])] = f;
  }
  return plan;
}

struct CvReport {
  std::string method;
  std::string config;
  Eigen::Index n_samples = 0;
  std::vector<double> fold_errors;             // mean relative error per fold
  std::vector<Eigen::Index> n_train_per_fold;  // training-set size per fold
  double overall = 0.0;                        // mean of fold_errors
};

/// k-fold estimate of the mean relative reconstruction error. Folds are
/// averaged with equal weight.
inline CvReport cv_error(const SnapshotSet& snapshots, const ParameterSpace& space,
                         const RomConfig& config, int k, std::uint64_t seed,
                         const FieldJacobianFn& jacobian = {}) {
  const FoldPlan plan = kfold_split(snapshots.count(), k, seed);
  CvReport report;
  report.method = method_name(config.method);
  report.config = describe(config);
  report.n_samples = snapshots.count();
  for (int f = 0; f < k; ++f) {
    const auto train_idx = plan.train_indices(f);
    const auto test_idx = plan.test_indices(f);
    RomModel model;
    try {
      model = train(snapshots.select(train_idx), space, config, jacobian, seed);
    } catch (const Error&) {
      detail::rethrow_with_context("fold " + std::to_string(f));
    }
    double sum = 0.0;
    for (Eigen::Index i : test_idx) {
      const RomPrediction pred = predict(model, snapshots.params().values.col(i));
      sum += relative_error(snapshots.fields().col(i), pred.field);
    }
    report.fold_errors.push_back(sum / static_cast<double>(test_idx.size()));
    report.n_train_per_fold.push_back(static_cast<Eigen::Index>(train_idx.size()));
  }
  report.overall = std::accumulate(report.fold_errors.begin(), report.fold_errors.end(), 0.0) /
                   static_cast<double>(k);
  return report;
}

struct SweepRow {
  Eigen::Index n_samples = 0;
  std::string method;
  int fold = 0;
  double relative_error = 0.0;
};

struct SweepSummaryRow {
  Eigen::Index n_samples = 0;
  std::string method;
  double mean_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> folds;
  std::vector<SweepSummaryRow> summary;
  std::vector<CvReport> reports;
};

/// Indices of the first s entries of a seeded permutation, in ascending
/// order. Subsets for increasing s are nested.
inline std::vector<Eigen::Index> nested_subset(Eigen::Index n, Eigen::Index s, std::uint64_t seed) {
  if (s < 1 || s > n)
    throw InvalidArgument("subset size " + std::to_string(s) + " outside [1, " + std::to_string(n) + "]");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::mt19937_64 gen(seed);
  std::shuffle(perm.begin(), perm.end(), gen);
  perm.resize(static_cast<std::size_t>(s));
  std::sort(perm.begin(), perm.end());
  return perm;
}

/// Cross-validated error of every config at every subset size.
inline SweepResult sample_sweep(const SnapshotSet& dataset, const ParameterSpace& space,
                                const std::vector<Eigen::Index>& sizes,
                                const std::vector<RomConfig>& configs, int k, std::uint64_t seed,
                                const FieldJacobianFn& jacobian = {}) {
  if (sizes.empty() || configs.empty()) throw InvalidArgument("sweep needs sizes and configs");
  SweepResult result;
  for (Eigen::Index s : sizes) {
    if (s > dataset.count())
      throw InvalidArgument("sweep size " + std::to_string(s) + " exceeds the " +
                            std::to_string(dataset.count()) + " available samples");
    const SnapshotSet subset = dataset.select(nested_subset(dataset.count(), s, seed));
    for (const RomConfig& config : configs) {
      CvReport r;
      try {
        r = cv_error(subset, space, config, k, seed, jacobian);
      } catch (const Error&) {
        detail::rethrow_with_context("sweep size " + std::to_string(s));
      }
      for (int f = 0; f < k; ++f)
        result.folds.push_back({s, r.method, f, r.fold_errors[static_cast<std::size_t>(f)]});
      result.summary.push_back({s, r.method, r.overall});
      result.reports.push_back(std::move(r));
    }
  }
  return result;
}

// --- synthetic ridge problems ------------------------------------------------

enum class ProfileKind { Quadratic, Sine, Softplus, Linear };

/// h(t) = offset + amplitude * base(scale * t + shift).
struct RidgeProfile {
  ProfileKind kind = ProfileKind::Quadratic;
  double amplitude = 1.0;
  double scale = 1.0;
  double shift = 0.0;
  double offset = 0.0;

  double operator()(double t) const { return offset + amplitude * base(scale * t + shift); }
  double derivative(double t) const { return amplitude * scale * base_derivative(scale * t + shift); }

 private:
  double base(double s) const {
    switch (kind) {
      case ProfileKind::Quadratic:
        return s * s;
      case ProfileKind::Sine:
        return std::sin(s);
      case ProfileKind::Softplus:
        return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
      case ProfileKind::Linear:
        return s;
    }
    return 0.0;
  }
  double base_derivative(double s) const {
    switch (kind) {
      case ProfileKind::Quadratic:
        return 2.0 * s;
      case ProfileKind::Sine:
        return std::cos(s);
      case ProfileKind::Softplus:
        return 1.0 / (1.0 + std::exp(-s));
      case ProfileKind::Linear:
        return 1.0;
    }
    return 0.0;
  }
};

/// Field u(mu) = sum_j h_j(w_j^T x) b_j with x the reference coordinates of mu.
struct SyntheticProblem {
  ParameterSpace space;
  Eigen::MatrixXd spatial;     // N x r, orthonormal columns b_j
  Eigen::MatrixXd directions;  // p x r, unit columns w_j
  std::vector<RidgeProfile> profiles;

  Eigen::Index dim() const { return space.dim(); }
  Eigen::Index dofs() const { return spatial.rows(); }
  Eigen::Index terms() const { return spatial.cols(); }

  /// Coefficients h_j(w_j^T x) at a reference point.
  Eigen::VectorXd term_values(const Eigen::Ref<const Eigen::VectorXd>& x_ref) const {
    Eigen::VectorXd h(terms());
    for (Eigen::Index j = 0; j < terms(); ++j)
      h[j] = profiles[static_cast<std::size_t>(j)](directions.col(j).dot(x_ref));
    return h;
  }

  /// Gradient of term j with respect to the reference coordinates.
  Eigen::VectorXd term_gradient(Eigen::Index j, const Eigen::Ref<const Eigen::VectorXd>& x_ref) const {
    return profiles[static_cast<std::size_t>(j)].derivative(directions.col(j).dot(x_ref)) * directions.col(j);
  }

  Eigen::VectorXd field_at_reference(const Eigen::Ref<const Eigen::VectorXd>& x_ref) const {
    return spatial * term_values(x_ref);
  }

  Eigen::VectorXd field(const Eigen::Ref<const Eigen::VectorXd>& mu) const {
    return field_at_reference(rescale_to_reference(space, mu));
  }

  /// du/dx (N x p) in reference coordinates.
  Eigen::MatrixXd jacobian_at_reference(const Eigen::Ref<const Eigen::VectorXd>& x_ref) const {
    Eigen::MatrixXd dh(terms(), dim());
    for (Eigen::Index j = 0; j < terms(); ++j) dh.row(j) = term_gradient(j, x_ref).transpose();
    return spatial * dh;
  }

  FieldJacobianFn jacobian() const {
    return [self = *this](const Eigen::VectorXd& x) { return self.jacobian_at_reference(x); };
  }
};

namespace detail {

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  return m;
}

}  // namespace detail

/// Default profile for term j: cycles quadratic, sine, softplus with
/// amplitude 0.65^j.
inline RidgeProfile default_profile(Eigen::Index j) {
  const double amplitude = std::pow(0.65, static_cast<double>(j));
  switch (j % 3) {
    case 0:
      return {ProfileKind::Quadratic, amplitude, 1.0, 0.5, 0.0};
    case 1:
      return {ProfileKind::Sine, amplitude, 1.5, 0.0, 0.0};
    default:
      return {ProfileKind::Softplus, amplitude, 2.0, 0.0, 0.0};
  }
}

/// Random r-term ridge problem on `space` with N spatial DOFs.
inline SyntheticProblem make_ridge_problem(const ParameterSpace& space, Eigen::Index n_dofs,
                                           Eigen::Index r, std::uint64_t seed,
                                           std::vector<RidgeProfile> profiles = {}) {
  const Eigen::Index p = space.dim();
  if (r < 1 || r > n_dofs) throw InvalidArgument("term count must lie in [1, N]");
  if (profiles.empty())
    for (Eigen::Index j = 0; j < r; ++j) profiles.push_back(default_profile(j));
  if (static_cast<Eigen::Index>(profiles.size()) != r)
    throw InvalidArgument("profile count must equal the term count");

  std::mt19937_64 gen(seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(detail::gaussian_matrix(n_dofs, r, gen));
  Eigen::MatrixXd b = qr.householderQ() * Eigen::MatrixXd::Identity(n_dofs, r);
  Eigen::MatrixXd w = detail::gaussian_matrix(p, r, gen);
  w.colwise().normalize();
  return SyntheticProblem{space, std::move(b), std::move(w), std::move(profiles)};
}

inline SyntheticProblem make_ridge_problem(Eigen::Index p, Eigen::Index n_dofs, Eigen::Index r,
                                           std::uint64_t seed) {
  return make_ridge_problem(ParameterSpace::cube(p, -1.0, 1.0), n_dofs, r, seed);
}

/// Evaluates the truth field at each (physical) sample column.
inline SnapshotSet snapshot_from_problem(const SyntheticProblem& problem, const ParameterSamples& samples) {
  if (samples.frame != Frame::Physical) throw InvalidArgument("snapshots are generated from physical samples");
  if (samples.dim() != problem.dim()) throw InvalidArgument("sample dimension does not match problem");
  Eigen::MatrixXd fields(problem.dofs(), samples.count());
  for (Eigen::Index j = 0; j < samples.count(); ++j) fields.col(j) = problem.field(samples.values.col(j));
  return SnapshotSet(std::move(fields), samples);
}

enum class Preset { BeamProxy, PressureProxy };

inline std::vector<std::string> preset_names() { return {"beam-proxy", "pressure-proxy"}; }

inline Preset parse_preset(const std::string& name) {
  if (name == "beam-proxy") return Preset::BeamProxy;
  if (name == "pressure-proxy") return Preset::PressureProxy;
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown preset '" + name + "'; available: " + list);
}

struct PresetInfo {
  SyntheticProblem problem;
  Eigen::Index rank = 0;     // POD modes retained
  Eigen::Index samples = 0;  // size of the full dataset
  int folds = 5;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultPresetSeed = 1;

/// Proxy datasets: a 6-parameter, 6-term beam-like field and an 8-parameter,
/// 9-term pressure-like field. The first term carries a
/// constant offset of 5 playing the role of the mean field.
inline PresetInfo make_preset(Preset preset, std::uint64_t seed = kDefaultPresetSeed) {
  const bool beam = preset == Preset::BeamProxy;
  const Eigen::Index r = beam ? 6 : 9;
  const ParameterSpace space = beam ? ParameterSpace::cube(6, 5.0, 10.0) : ParameterSpace::cube(8, -0.3, 0.3);
  std::vector<RidgeProfile> profiles;
  for (Eigen::Index j = 0; j < r; ++j) profiles.push_back(default_profile(j));
  profiles[0].offset = 5.0;
  return {make_ridge_problem(space, beam ? 500 : 2000, r, seed, std::move(profiles)), r, 200, 5, seed};
}

/// The preset's full dataset; samples are drawn with seed + 1.
inline SnapshotSet preset_dataset(const PresetInfo& info) {
  return snapshot_from_problem(info.problem, sample_uniform(info.problem.space, info.samples, info.seed + 1));
}

}  // namespace podas

#endif  // PODAS_EVALUATION_HPP
