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

#ifndef PODAS_PARAM_SPACE_HPP
#define PODAS_PARAM_SPACE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "podas/errors.hpp"

namespace podas {

enum class Density { Uniform };

enum class Frame { Physical, Reference };

/// Box-shaped parameter domain with an input density.
class ParameterSpace {
 public:
  ParameterSpace(Eigen::VectorXd lower, Eigen::VectorXd upper,
                 Density density = Density::Uniform)
      : lower_(std::move(lower)), upper_(std::move(upper)), density_(density) {
    if (lower_.size() < 1) throw InvalidArgument("parameter space needs at least one axis");
    if (lower_.size() != upper_.size())
      throw InvalidArgument("lower and upper bounds differ in length");
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i]))
        throw InvalidArgument("axis " + std::to_string(i) + ": lower bound must be < upper bound");
    }
  }

  /// Same [lo, hi] interval on every axis.
  static ParameterSpace cube(Eigen::Index dim, double lo, double hi) {
    return ParameterSpace(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
  }

  Eigen::Index dim() const { return lower_.size(); }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  Density density() const { return density_; }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& mu) const {
    return mu.size() == dim() && (mu.array() >= lower_.array()).all() &&
           (mu.array() <= upper_.array()).all();
  }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Density density_;
};

/// p x n sample matrix, one sample per column, tagged with its frame.
struct ParameterSamples {
  Eigen::MatrixXd values;
  Frame frame = Frame::Physical;

  Eigen::Index dim() const { return values.rows(); }
  Eigen::Index count() const { return values.cols(); }
};

/// Draws n samples i.i.d. from the space density. Deterministic in seed.
inline ParameterSamples sample_uniform(const ParameterSpace& space, Eigen::Index n,
                                       std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample count must be >= 1");
  std::mt19937_64 gen(seed);
  ParameterSamples out{Eigen::MatrixXd(space.dim(), n), Frame::Physical};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      std::uniform_real_distribution<double> axis(space.lower()[i], space.upper()[i]);
      out.values(i, j) = axis(gen);
    }
  }
  return out;
}

namespace detail {

inline void check_frame(const ParameterSpace& space, const ParameterSamples& s, Frame expected) {
  if (s.frame != expected)
    throw InvalidArgument(expected == Frame::Physical ? "samples must be in physical coordinates"
                                                      : "samples must be in reference coordinates");
  if (s.dim() != space.dim())
    throw InvalidArgument("sample dimension " + std::to_string(s.dim()) +
                          " does not match parameter space dimension " +
                          std::to_string(space.dim()));
}

}  // namespace detail

/// Affine map of a single point to [-1, 1]^p. No bounds check.
inline Eigen::VectorXd rescale_to_reference(const ParameterSpace& space,
                                            const Eigen::Ref<const Eigen::VectorXd>& mu) {
  return (2.0 * (mu - space.lower()).array() / (space.upper() - space.lower()).array() - 1.0)
      .matrix();
}

/// Inverse of rescale_to_reference. No bounds check.
inline Eigen::VectorXd rescale_to_physical(const ParameterSpace& space,
                                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  return (space.lower().array() +
          0.5 * (x.array() + 1.0) * (space.upper() - space.lower()).array())
      .matrix();
}

/// Maps physical samples to the origin-centred reference cube.
inline ParameterSamples to_reference(const ParameterSpace& space, const ParameterSamples& physical) {
  detail::check_frame(space, physical, Frame::Physical);
  ParameterSamples out{Eigen::MatrixXd(physical.dim(), physical.count()), Frame::Reference};
  for (Eigen::Index j = 0; j < physical.count(); ++j) {
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      const double v = physical.values(i, j);
      if (!(v >= space.lower()[i] && v <= space.upper()[i]))
        throw InvalidArgument("sample " + std::to_string(j) + " out of bounds on axis " +
                              std::to_string(i));
    }
    out.values.col(j) = rescale_to_reference(space, physical.values.col(j));
  }
  return out;
}

inline ParameterSamples from_reference(const ParameterSpace& space, const ParameterSamples& ref) {
  detail::check_frame(space, ref, Frame::Reference);
  ParameterSamples out{Eigen::MatrixXd(ref.dim(), ref.count()), Frame::Physical};
  for (Eigen::Index j = 0; j < ref.count(); ++j) {
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      const double v = ref.values(i, j);
      if (!(v >= -1.0 && v <= 1.0))
        throw InvalidArgument("sample " + std::to_string(j) + " out of bounds on axis " +
                              std::to_string(i));
    }
    out.values.col(j) = rescale_to_physical(space, ref.values.col(j));
  }
  return out;
}

}  // namespace podas

#endif  // PODAS_PARAM_SPACE_HPP
