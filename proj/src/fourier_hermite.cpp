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

#include "spdp/fourier_hermite.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <string>

#include "spdp/errors.hpp"

namespace spdp {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& warning_handler() {
  static WarningHandler handler = [](const std::string& msg) {
    std::cerr << "spdp warning: " << msg << '\n';
  };
  return handler;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void emit_warning(const std::string& message) {
  std::lock_guard<std::mutex> lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

double hermite_univariate(int m, double x) {
  if (m < 0) throw std::invalid_argument("hermite_univariate: order must be >= 0");
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < m; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

FHCoefficients fh_coefficients_from_values(const Vector& values, const SigmaRule& rule) {
  if (static_cast<std::size_t>(values.size()) != rule.size()) {
    throw std::invalid_argument("fh_coefficients: one value per sigma point required");
  }
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if (!std::isfinite(values(static_cast<Eigen::Index>(i)))) {
      throw NonFiniteError("fh_coefficients: non-finite value at sigma point " + std::to_string(i),
                           -1, rule.point(i));
    }
  }
  const int n = rule.dim();
  FHCoefficients coef;
  coef.a = rule.weights().dot(values);
  coef.b = Vector::Zero(n);
  coef.C = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double wg = rule.weight(i) * (values(static_cast<Eigen::Index>(i)) - coef.a);
    const auto xi = rule.point(i);
    coef.b.noalias() += wg * xi;
    coef.C.noalias() += wg * (xi * xi.transpose());
    coef.C.diagonal().array() -= wg;
  }
  const double asym = (coef.C - coef.C.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryWarnThreshold) {
    emit_warning("Fourier-Hermite C asymmetric by " + std::to_string(asym) +
                 "; the sigma-point rule is likely inadequate");
  }
  coef.C = 0.5 * (coef.C + coef.C.transpose()).eval();
  return coef;
}

FHCoefficients fh_coefficients(const ScalarField& g, const GaussianWindow& window,
                               const SigmaRule& rule) {
  if (rule.dim() != window.dim()) {
    throw std::invalid_argument("fh_coefficients: rule/window dimension mismatch");
  }
  Vector values(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vector y = window.transform(rule.point(i));
    const double gi = g(y);
    if (!std::isfinite(gi)) {
      throw NonFiniteError("fh_coefficients: non-finite value at sigma point " + std::to_string(i),
                           -1, y);
    }
    values(static_cast<Eigen::Index>(i)) = gi;
  }
  return fh_coefficients_from_values(values, rule);
}

QuadraticModel fh_quadratic_model(const FHCoefficients& coef, const GaussianWindow& window) {
  if (coef.dim() != window.dim()) {
    throw std::invalid_argument("fh_quadratic_model: coefficient/window dimension mismatch");
  }
  const auto L = window.chol().triangularView<Eigen::Lower>();
  QuadraticModel model;
  model.c0 = coef.a - 0.5 * coef.C.trace();
  model.grad = L.transpose().solve(coef.b);
  // X = L^{-T} C, hess = X L^{-1} = (L^{-T} X^T)^T
  const Matrix X = L.transpose().solve(coef.C);
  const Matrix Xt = X.transpose();
  model.hess = L.transpose().solve(Xt).transpose();
  model.hess = 0.5 * (model.hess + model.hess.transpose()).eval();
  return model;
}

}  // namespace spdp
