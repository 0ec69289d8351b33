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

#ifndef PODAS_ROM_HPP
#define PODAS_ROM_HPP

#include <cstdint>
#include <cstring>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "podas/active_subspace.hpp"
#include "podas/errors.hpp"
#include "podas/gpr.hpp"
#include "podas/io.hpp"
#include "podas/param_space.hpp"
#include "podas/pod.hpp"
#include "podas/rbf.hpp"

namespace podas {

/// Interpolate each coefficient over the full reference cube.
struct FullRbfMethod {
  RbfKernel kernel = RbfKernel::thin_plate();
};

/// Regress each coefficient on its own one-dimensional active variable.
struct AsGprMethod {
  GradientMethod gradients = GradientMethod::LocalLinear;
};

using CoefficientMethod = std::variant<FullRbfMethod, AsGprMethod>;

struct RomConfig {
  TruncationCriterion truncation = EnergyFraction{1.0};
  CoefficientMethod method = FullRbfMethod{};
  bool center = false;
  GpOptions gp;
};

inline std::string method_name(const CoefficientMethod& m) {
  return std::holds_alternative<FullRbfMethod>(m) ? "full-rbf" : "as-gpr";
}

/// Flat key=value description of a configuration, ';'-separated.
inline std::string describe(const RomConfig& c) {
  std::string s = "method=" + method_name(c.method);
  if (const auto* f = std::get_if<FullRbfMethod>(&c.method)) {
    s += ";kernel=" + std::string(to_string(f->kernel.type));
    if (f->kernel.type != RbfKernelType::ThinPlateSpline) s += ";shape=" + io::format_double(f->kernel.shape);
  } else {
    s += ";gradients=" + std::string(to_string(std::get<AsGprMethod>(c.method).gradients));
    s += ";gp_grid=" + describe(c.gp.grid);
  }
  if (const auto* r = std::get_if<FixedRank>(&c.truncation))
    s += ";rank=" + std::to_string(r->k);
  else
    s += ";energy=" + io::format_double(std::get<EnergyFraction>(c.truncation).tau);
  s += std::string(";center=") + (c.center ? "1" : "0");
  return s;
}

/// Jacobian du/dmu (N x p) of the full field in reference coordinates.
using FieldJacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

using CoefficientRegressor = std::variant<RbfInterpolant, AsRidgeModel>;

struct TrainingInfo {
  Eigen::Index n_train = 0;
  std::uint64_t seed = 0;
  std::string config;
};

struct RomModel {
  ParameterSpace space{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  PodBasis basis;
  std::vector<CoefficientRegressor> regressors;
  TrainingInfo info;
};

struct RomPrediction {
  Eigen::VectorXd field;
  Eigen::VectorXd coefficients;
  bool out_of_bounds = false;
};

namespace detail {

[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const IllConditioned& e) {
    throw IllConditioned(context + ": " + e.what(), e.condition());
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what());
  } catch (const Error& e) {
    throw InvalidArgument(context + ": " + e.what());
  }
}

inline AsRidgeModel fit_mode_ridge(const ParameterSamples& x_ref, const Eigen::VectorXd& c,
                                   const GradientSamples& grads, const GpOptions& gp) {
  try {
    return fit_as_ridge(x_ref, c, grads, gp);
  } catch (const NoActiveSubspace&) {
    // Coefficient constant over the samples: any direction represents it.
    const Eigen::Index p = x_ref.dim();
    Eigenpairs flat{Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Identity(p, p)};
    return fit_ridge_on_subspace(ActiveSubspace(std::move(flat), 1), x_ref, c, gp);
  }
}

}  // namespace detail

/// Builds the POD basis and one coefficient regressor per retained mode.
/// Parameters must be physical and inside `space`.
inline RomModel train(const SnapshotSet& snapshots, const ParameterSpace& space,
                      const RomConfig& config, const FieldJacobianFn& jacobian = {},
                      std::uint64_t seed = 0) {
  const Eigen::Index ns = snapshots.count();
  const Eigen::Index p = space.dim();
  if (ns < 2) throw InvalidArgument("training needs at least two snapshots");
  const ParameterSamples x_ref = to_reference(space, snapshots.params());

  const auto* as_method = std::get_if<AsGprMethod>(&config.method);
  if (as_method) {
    if (as_method->gradients == GradientMethod::Analytic && !jacobian)
      throw InvalidArgument("analytic gradients need a field Jacobian");
    if (as_method->gradients != GradientMethod::Analytic && ns < p + 2)
      throw InvalidArgument("estimated gradients need at least p + 2 = " + std::to_string(p + 2) +
                            " snapshots, got " + std::to_string(ns));
  }

  RomModel model;
  model.space = space;
  model.basis = truncate(compute_pod(snapshots, config.center).basis, config.truncation);
  model.info = {ns, seed, describe(config)};
  const ModalCoefficients coeffs = project(model.basis, snapshots);
  const Eigen::Index k = model.basis.rank();

  std::vector<Eigen::MatrixXd> jacobians;
  if (as_method && as_method->gradients == GradientMethod::Analytic) {
    for (Eigen::Index i = 0; i < ns; ++i) jacobians.push_back(jacobian(x_ref.values.col(i)));
  }

  model.regressors.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::VectorXd c = coeffs.row(j).transpose();
    try {
      if (const auto* full = std::get_if<FullRbfMethod>(&config.method)) {
        model.regressors.emplace_back(rbf_fit(x_ref.values, c, full->kernel, default_tail(full->kernel)));
        continue;
      }
      GradientSamples grads;
      if (as_method->gradients == GradientMethod::Analytic) {
        grads.method = GradientMethod::Analytic;
        grads.values.resize(p, ns);
        grads.fell_back.assign(static_cast<std::size_t>(ns), false);
        const Eigen::VectorXd mode = model.basis.modes.col(j);
        for (Eigen::Index i = 0; i < ns; ++i)
          grads.values.col(i) = jacobians[static_cast<std::size_t>(i)].transpose() * mode;
      } else {
        grads = estimate_gradients(x_ref, c, GradientStrategy{as_method->gradients, {}});
      }
      model.regressors.emplace_back(detail::fit_mode_ridge(x_ref, c, grads, config.gp));
    } catch (const Error&) {
      detail::rethrow_with_context("mode " + std::to_string(j + 1));
    }
  }
  return model;
}

inline double evaluate_regressor(const CoefficientRegressor& r, const Eigen::VectorXd& x_ref) {
  return std::visit([&](const auto& m) { return m(x_ref); }, r);
}

/// Coefficient predictions at a physical parameter point.
inline Eigen::VectorXd predict_coefficients(const RomModel& model,
                                            const Eigen::Ref<const Eigen::VectorXd>& mu) {
  if (mu.size() != model.space.dim())
    throw InvalidArgument("parameter has " + std::to_string(mu.size()) + " components, model expects " +
                          std::to_string(model.space.dim()));
  if (!mu.allFinite()) throw InvalidArgument("parameter has non-finite components");
  const Eigen::VectorXd x = rescale_to_reference(model.space, mu);
  Eigen::VectorXd alpha(static_cast<Eigen::Index>(model.regressors.size()));
  for (Eigen::Index j = 0; j < alpha.size(); ++j)
    alpha[j] = evaluate_regressor(model.regressors[static_cast<std::size_t>(j)], x);
  return alpha;
}

/// Full-field prediction. Points outside the box are extrapolated and flagged.
inline RomPrediction predict(const RomModel& model, const Eigen::Ref<const Eigen::VectorXd>& mu) {
  RomPrediction out;
  out.coefficients = predict_coefficients(model, mu);
  out.field = reconstruct(model.basis, out.coefficients);
  out.out_of_bounds = !model.space.contains(mu);
  return out;
}

/// ||exact - approx|| / ||exact||.
inline double relative_error(const Eigen::Ref<const Eigen::VectorXd>& exact,
                             const Eigen::Ref<const Eigen::VectorXd>& approx) {
  if (exact.size() != approx.size()) throw InvalidArgument("fields differ in length");
  const double norm = exact.norm();
  if (!(norm > 0.0)) throw Undefined("relative error undefined for a zero exact field");
  return (exact - approx).norm() / norm;
}

// --- ROMAS1 archive -----------------------------------------------------------
//
// Layout (little-endian):
//   "ROMAS1"  u64 version(=1)
//   u64 len, config bytes            (the describe() string)
//   u64 n_train, u64 seed
//   RSNP1 lower (p x 1), RSNP1 upper (p x 1)
//   RSNP1 modes (N x k), RSNP1 singular values (r x 1), u64 centered, RSNP1 mean (N x c)
//   u64 k, then k regressor records:
//     u64 tag 0 = RBF: u64 kernel, f64 shape, u64 tail+1, RSNP1 centers, RSNP1 weights, RSNP1 tail
//     u64 tag 1 = ridge: u64 active_dim, RSNP1 eigenvalues, RSNP1 eigenvectors,
//                 RSNP1 train_x, RSNP1 train_y, f64 length, f64 signal, f64 noise, f64 prior_mean

inline constexpr char kModelMagic[6] = {'R', 'O', 'M', 'A', 'S', '1'};
inline constexpr std::uint64_t kModelVersion = 1;

inline void save_model(std::ostream& out, const RomModel& m) {
  using io::detail::put_f64;
  using io::detail::put_u64;
  out.write(kModelMagic, sizeof kModelMagic);
  put_u64(out, kModelVersion);
  put_u64(out, m.info.config.size());
  out.write(m.info.config.data(), static_cast<std::streamsize>(m.info.config.size()));
  put_u64(out, static_cast<std::uint64_t>(m.info.n_train));
  put_u64(out, m.info.seed);
  io::write_rsnp(out, m.space.lower());
  io::write_rsnp(out, m.space.upper());
  io::write_rsnp(out, m.basis.modes);
  io::write_rsnp(out, m.basis.singular_values);
  put_u64(out, m.basis.centered ? 1 : 0);
  io::write_rsnp(out, m.basis.centered ? Eigen::MatrixXd(m.basis.mean) : Eigen::MatrixXd(m.basis.dofs(), 0));
  put_u64(out, m.regressors.size());
  for (const auto& r : m.regressors) {
    if (const auto* rbf = std::get_if<RbfInterpolant>(&r)) {
      put_u64(out, 0);
      put_u64(out, static_cast<std::uint64_t>(rbf->kernel().type));
      put_f64(out, rbf->kernel().shape);
      put_u64(out, static_cast<std::uint64_t>(static_cast<int>(rbf->tail_degree()) + 1));
      io::write_rsnp(out, rbf->centers());
      io::write_rsnp(out, rbf->weights());
      io::write_rsnp(out, rbf->tail());
    } else {
      const auto& ridge = std::get<AsRidgeModel>(r);
      const auto& gp = ridge.response();
      put_u64(out, 1);
      put_u64(out, static_cast<std::uint64_t>(ridge.subspace().active_dim()));
      io::write_rsnp(out, ridge.subspace().eigenvalues());
      io::write_rsnp(out, ridge.subspace().eigenvectors());
      io::write_rsnp(out, gp.train_x());
      io::write_rsnp(out, gp.train_y());
      put_f64(out, gp.hyperparameters().length_scale);
      put_f64(out, gp.hyperparameters().signal_variance);
      put_f64(out, gp.hyperparameters().noise_variance);
      put_f64(out, gp.prior_mean());
    }
  }
  if (!out) throw InvalidArgument("failed to write model archive");
}

inline RomModel load_model(std::istream& in) {
  using io::detail::get_f64;
  using io::detail::get_u64;
  char magic[sizeof kModelMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
    throw InvalidArgument("not a ROMAS1 model archive");
  const std::uint64_t version = get_u64(in);
  if (version != kModelVersion)
    throw InvalidArgument("unsupported model archive version " + std::to_string(version));

  RomModel m;
  const std::uint64_t len = get_u64(in);
  if (len > (1u << 20)) throw InvalidArgument("corrupt model archive (config length)");
  m.info.config.resize(len);
  if (!in.read(m.info.config.data(), static_cast<std::streamsize>(len)))
    throw InvalidArgument("unexpected end of model archive");
  m.info.n_train = static_cast<Eigen::Index>(get_u64(in));
  m.info.seed = get_u64(in);
  Eigen::VectorXd lower = io::read_rsnp(in);
  Eigen::VectorXd upper = io::read_rsnp(in);
  m.space = ParameterSpace(lower, upper);
  m.basis.modes = io::read_rsnp(in);
  m.basis.singular_values = io::read_rsnp(in);
  m.basis.centered = get_u64(in) != 0;
  Eigen::MatrixXd mean = io::read_rsnp(in);
  if (m.basis.centered) m.basis.mean = mean;

  const std::uint64_t k = get_u64(in);
  if (k != static_cast<std::uint64_t>(m.basis.rank()))
    throw InvalidArgument("model archive regressor count does not match basis rank");
  for (std::uint64_t j = 0; j < k; ++j) {
    const std::uint64_t tag = get_u64(in);
    if (tag == 0) {
      RbfKernel kernel;
      const std::uint64_t type = get_u64(in);
      if (type > 2) throw InvalidArgument("corrupt model archive (kernel)");
      kernel.type = static_cast<RbfKernelType>(type);
      kernel.shape = get_f64(in);
      const std::uint64_t tail = get_u64(in);
      if (tail > 2) throw InvalidArgument("corrupt model archive (tail)");
      Eigen::MatrixXd centers = io::read_rsnp(in);
      Eigen::VectorXd weights = io::read_rsnp(in);
      Eigen::VectorXd tail_coeffs = io::read_rsnp(in);
      m.regressors.emplace_back(RbfInterpolant(std::move(centers), std::move(weights), std::move(tail_coeffs),
                                               kernel, static_cast<PolynomialTail>(static_cast<int>(tail) - 1)));
    } else if (tag == 1) {
      const auto active = static_cast<Eigen::Index>(get_u64(in));
      Eigenpairs pairs{io::read_rsnp(in), io::read_rsnp(in)};
      Eigen::VectorXd x = io::read_rsnp(in);
      Eigen::VectorXd y = io::read_rsnp(in);
      GpHyperparameters h;
      h.length_scale = get_f64(in);
      h.signal_variance = get_f64(in);
      h.noise_variance = get_f64(in);
      const double prior = get_f64(in);
      m.regressors.emplace_back(AsRidgeModel(ActiveSubspace(std::move(pairs), active),
                                             GpModel1d(std::move(x), std::move(y), h, prior)));
    } else {
      throw InvalidArgument("corrupt model archive (regressor tag " + std::to_string(tag) + ")");
    }
  }
  return m;
}

}  // namespace podas

#endif  // PODAS_ROM_HPP
