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

#include "spdp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spdp/errors.hpp"

namespace spdp {

SigmaRule::SigmaRule(Matrix points, Vector weights, int exactness_degree, std::string name)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      exactness_degree_(exactness_degree),
      name_(std::move(name)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("SigmaRule: empty rule");
  }
  if (points_.cols() != weights_.size()) {
    throw std::invalid_argument("SigmaRule: point/weight count mismatch");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("SigmaRule: weights do not sum to one");
  }
}

GaussianWindow::GaussianWindow(Vector mean, Matrix chol)
    : mean_(std::move(mean)), chol_(std::move(chol)) {
  const Eigen::Index n = mean_.size();
  if (n < 1 || chol_.rows() != n || chol_.cols() != n) {
    throw std::invalid_argument("GaussianWindow: dimension mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(chol_(i, i) > 0.0) || !std::isfinite(chol_(i, i))) {
      throw std::invalid_argument("GaussianWindow: factor diagonal must be positive");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (chol_(i, j) != 0.0) {
        throw std::invalid_argument("GaussianWindow: factor must be lower triangular");
      }
    }
  }
}

GaussianWindow GaussianWindow::from_covariance(Vector mean, const Matrix& covariance) {
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw std::invalid_argument("GaussianWindow: covariance dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(0.5 * (covariance + covariance.transpose()));
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("GaussianWindow: covariance is not positive definite");
  }
  Matrix chol = llt.matrixL();
  return GaussianWindow(std::move(mean), std::move(chol));
}

Vector GaussianWindow::transform(const Eigen::Ref<const Vector>& xi) const {
  return chol_.triangularView<Eigen::Lower>() * xi + mean_;
}

void gauss_hermite_1d(int order, Vector& nodes, Vector& weights) {
  if (order < 1) {
    throw std::invalid_argument("gauss_hermite_1d: order must be >= 1");
  }
  nodes.resize(order);
  weights.resize(order);
  if (order == 1) {
    nodes(0) = 0.0;
    weights(0) = 1.0;
    return;
  }

  // Golub-Welsch on the Jacobi matrix of the monic probabilists' Hermite
  // polynomials: x He_k = He_{k+1} + k He_{k-1}.
  Vector diag = Vector::Zero(order);
  Vector sub(order - 1);
  for (int k = 1; k < order; ++k) sub(k - 1) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_1d: eigen-decomposition failed");
  }
  const Vector raw_nodes = eig.eigenvalues();
  Vector raw_weights(order);
  for (int i = 0; i < order; ++i) raw_weights(i) = eig.eigenvectors()(0, i) * eig.eigenvectors()(0, i);

  // Enforce exact symmetry about zero; eigenvalues come back ascending.
  for (int i = 0; i < order; ++i) {
    const int j = order - 1 - i;
    nodes(i) = 0.5 * (raw_nodes(i) - raw_nodes(j));
    weights(i) = 0.5 * (raw_weights(i) + raw_weights(j));
  }
  if (order % 2 == 1) nodes(order / 2) = 0.0;
  weights /= weights.sum();
}

std::size_t gauss_hermite_point_count(int dim, int order) {
  if (dim < 1 || order < 1) {
    throw std::invalid_argument("gauss_hermite_point_count: dim and order must be >= 1");
  }
  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) {
    if (count > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(order)) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= static_cast<std::size_t>(order);
  }
  return count;
}

SigmaRule gauss_hermite_rule(int dim, int order, std::size_t max_points) {
  const std::size_t count = gauss_hermite_point_count(dim, order);
  if (count > max_points) {
    throw std::invalid_argument("gauss_hermite_rule: " + std::to_string(order) + "^" +
                                std::to_string(dim) + " points exceeds the cap of " +
                                std::to_string(max_points));
  }
  Vector nodes, w1;
  gauss_hermite_1d(order, nodes, w1);

  Matrix points(dim, static_cast<Eigen::Index>(count));
  Vector weights(static_cast<Eigen::Index>(count));
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t c = 0; c < count; ++c) {
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      points(d, static_cast<Eigen::Index>(c)) = nodes(idx[static_cast<std::size_t>(d)]);
      w *= w1(idx[static_cast<std::size_t>(d)]);
    }
    weights(static_cast<Eigen::Index>(c)) = w;
    // odometer increment, last axis fastest
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < order) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  weights /= weights.sum();
  return SigmaRule(std::move(points), std::move(weights), 2 * order - 1,
                   "GH" + std::to_string(order));
}

std::size_t cubature_point_count(int dim, int degree) {
  if (dim < 1) throw std::invalid_argument("cubature_point_count: dim must be >= 1");
  const auto m = static_cast<std::size_t>(dim);
  switch (degree) {
    case 3:
      return 2 * m;
    case 5:
      return 2 * m * m + 1;
    case 7:
      return (4 * m * m * m + 8 * m + 3) / 3;
    default:
      throw std::invalid_argument("cubature rule degree must be 3, 5 or 7, got " +
                                  std::to_string(degree));
  }
}

namespace {

// Builds fully symmetric point sets generator by generator.
class SymmetricRuleBuilder {
 public:
  explicit SymmetricRuleBuilder(int dim) : dim_(dim) {}

  void center(double w) { push(Vector::Zero(dim_), w); }

  // +-r e_i
  void axes(double r, double w) {
    for (int i = 0; i < dim_; ++i) {
      for (double s : {1.0, -1.0}) {
        Vector p = Vector::Zero(dim_);
        p(i) = s * r;
        push(p, w);
      }
    }
  }

  // +-r e_i +-r e_j, i < j
  void pairs(double r, double w) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i + 1; j < dim_; ++j) {
        for (double si : {1.0, -1.0}) {
          for (double sj : {1.0, -1.0}) {
            Vector p = Vector::Zero(dim_);
            p(i) = si * r;
            p(j) = sj * r;
            push(p, w);
          }
        }
      }
    }
  }

  // +-r e_i +-r e_j +-r e_l, i < j < l
  void triples(double r, double w) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i + 1; j < dim_; ++j) {
        for (int l = j + 1; l < dim_; ++l) {
          for (double si : {1.0, -1.0}) {
            for (double sj : {1.0, -1.0}) {
              for (double sl : {1.0, -1.0}) {
                Vector p = Vector::Zero(dim_);
                p(i) = si * r;
                p(j) = sj * r;
                p(l) = sl * r;
                push(p, w);
              }
            }
          }
        }
      }
    }
  }

  SigmaRule build(int degree) {
    Matrix points(dim_, static_cast<Eigen::Index>(pts_.size()));
    Vector weights(static_cast<Eigen::Index>(pts_.size()));
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      points.col(static_cast<Eigen::Index>(i)) = pts_[i];
      weights(static_cast<Eigen::Index>(i)) = wts_[i];
    }
    return SigmaRule(std::move(points), std::move(weights), degree, "UT" + std::to_string(degree));
  }

 private:
  void push(const Vector& p, double w) {
    pts_.push_back(p);
    wts_.push_back(w);
  }

  int dim_;
  std::vector<Vector> pts_;
  std::vector<double> wts_;
};

SigmaRule cubature3(int m) {
  SymmetricRuleBuilder b(m);
  b.axes(std::sqrt(static_cast<double>(m)), 1.0 / (2.0 * m));
  return b.build(3);
}

// Generators {0}, [r], [r, r] with r^2 = 3.
SigmaRule cubature5(int m) {
  const double md = m;
  const double r = std::sqrt(3.0);
  const double w_pair = 1.0 / 36.0;
  const double w_axis = (4.0 - md) / 18.0;
  const double w_center = (md * md - 7.0 * md + 18.0) / 18.0;
  SymmetricRuleBuilder b(m);
  b.center(w_center);
  b.axes(r, w_axis);
  if (m >= 2) b.pairs(r, w_pair);
  return b.build(5);
}

// Generators {0}, [u], [v], [u, u], [v, v], [u, u, u] with u^2 = 1, v^2 = 6.
//
// Per-axis marginal: total weight alpha on +-u and beta on +-v must match
// E[x^2], E[x^4], E[x^6] = 1, 3, 15, which forces 3(U + V) - UV = 15 for
// U = u^2, V = v^2. The mixed moments E[x^2 y^2] = 1, E[x^4 y^2] = 3 and
// E[x^2 y^2 z^2] = 1 then fix the pair and triple weights.
SigmaRule cubature7(int m) {
  const double md = m;
  const double U = 1.0;
  const double V = 6.0;
  const double alpha = (3.0 - V) / (U * (U - V));
  const double beta = (3.0 - U) / (V * (V - U));

  const double w_triple = 1.0 / (8.0 * U * U * U);
  // 4 w_uu U^2 + 4 w_vv V^2 = 1 - (m-2)/U
  // 4 w_uu U^3 + 4 w_vv V^3 = 3 - (m-2)
  const double r1 = 1.0 - (md - 2.0) / U;
  const double r2 = 3.0 - (md - 2.0);
  const double det = U * U * V * V * V - V * V * U * U * U;
  const double w_uu = (r1 * V * V * V - r2 * V * V) / (4.0 * det);
  const double w_vv = (r2 * U * U - r1 * U * U * U) / (4.0 * det);

  const double w_u = 0.5 * (alpha - 4.0 * (md - 1.0) * w_uu - 4.0 * (md - 1.0) * (md - 2.0) * w_triple);
  const double w_v = 0.5 * (beta - 4.0 * (md - 1.0) * w_vv);
  const double w_center = 1.0 - 2.0 * md * (w_u + w_v) - 2.0 * md * (md - 1.0) * (w_uu + w_vv) -
                          (4.0 / 3.0) * md * (md - 1.0) * (md - 2.0) * w_triple;

  const double u = std::sqrt(U);
  const double v = std::sqrt(V);
  SymmetricRuleBuilder b(m);
  b.center(w_center);
  b.axes(u, w_u);
  b.axes(v, w_v);
  if (m >= 2) {
    b.pairs(u, w_uu);
    b.pairs(v, w_vv);
  }
  if (m >= 3) b.triples(u, w_triple);
  return b.build(7);
}

}  // namespace

SigmaRule cubature_rule(int dim, int degree) {
  if (dim < 1) throw std::invalid_argument("cubature_rule: dim must be >= 1");
  switch (degree) {
    case 3:
      return cubature3(dim);
    case 5:
      return cubature5(dim);
    case 7:
      return cubature7(dim);
    default:
      throw std::invalid_argument("cubature rule degree must be 3, 5 or 7, got " +
                                  std::to_string(degree));
  }
}

double gaussian_expectation(const SigmaRule& rule, const GaussianWindow& window,
                            const ScalarField& g) {
  if (rule.dim() != window.dim()) {
    throw std::invalid_argument("gaussian_expectation: rule/window dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vector y = window.transform(rule.point(i));
    const double gi = g(y);
    if (!std::isfinite(gi)) {
      throw NonFiniteError("gaussian_expectation: non-finite value at sigma point " +
                               std::to_string(i),
                           -1, y);
    }
    sum += rule.weight(i) * gi;
  }
  return sum;
}

}  // namespace spdp
