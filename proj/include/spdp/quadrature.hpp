/*
 Copyright 2026 The SPDP Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "spdp/types.hpp"

namespace spdp {

/// Unit-Gaussian sigma-point rule: sum_i w_i g(xi_i) ~= E[g(x)], x ~ N(0, I).
///
/// Points are stored column-wise (dim x size). Weights may be negative for
/// the symmetric higher-degree rules; they always sum to one.
class SigmaRule {
 public:
  SigmaRule(Matrix points, Vector weights, int exactness_degree, std::string name);

  int dim() const { return static_cast<int>(points_.rows()); }
  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  auto point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }
  double weight(std::size_t i) const { return weights_(static_cast<Eigen::Index>(i)); }

  /// Highest total polynomial degree integrated exactly.
  int exactness_degree() const { return exactness_degree_; }
  const std::string& name() const { return name_; }

 private:
  Matrix points_;
  Vector weights_;
  int exactness_degree_;
  std::string name_;
};

/// N(mean, chol * chol^T) with a lower-triangular, positive-diagonal factor.
class GaussianWindow {
 public:
  /// Throws std::invalid_argument unless chol is lower triangular with a
  /// strictly positive diagonal.
  GaussianWindow(Vector mean, Matrix chol);

  /// Factorizes an SPD covariance; throws std::invalid_argument otherwise.
  static GaussianWindow from_covariance(Vector mean, const Matrix& covariance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& chol() const { return chol_; }
  Matrix covariance() const { return chol_ * chol_.transpose(); }

  /// chol * xi + mean
  Vector transform(const Eigen::Ref<const Vector>& xi) const;

 private:
  Vector mean_;
  Matrix chol_;
};

inline constexpr std::size_t kDefaultMaxPoints = 1'000'000;

/// Tensor product of the 1-D p-point probabilists' Gauss-Hermite rule.
/// Points are ordered lexicographically with the first axis varying slowest.
SigmaRule gauss_hermite_rule(int dim, int order, std::size_t max_points = kDefaultMaxPoints);

/// Fully symmetric cubature ("unscented") rule of degree 3, 5 or 7.
///
///   degree 3:  2m points  (+-sqrt(m) e_i)
///   degree 5:  2m^2 + 1 points
///   degree 7:  (4m^3 + 8m + 3) / 3 points
SigmaRule cubature_rule(int dim, int degree);

/// 1-D probabilists' Gauss-Hermite nodes and weights (weights sum to one).
void gauss_hermite_1d(int order, Vector& nodes, Vector& weights);

/// Number of points the given rule family produces without building it.
std::size_t gauss_hermite_point_count(int dim, int order);
std::size_t cubature_point_count(int dim, int degree);

using ScalarField = std::function<double(const Vector&)>;

/// sum_i W_i g(chol * xi_i + mean). Throws NonFiniteError naming the sigma
/// point if g returns a non-finite value.
double gaussian_expectation(const SigmaRule& rule, const GaussianWindow& window,
                            const ScalarField& g);

}  // namespace spdp
