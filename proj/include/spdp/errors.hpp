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

#include <stdexcept>
#include <string>

#include "spdp/types.hpp"

namespace spdp {

/// A callable returned NaN or Inf. Carries the step index (or -1) and the
/// evaluation point when one is available.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, int step = -1, Vector point = Vector())
      : std::runtime_error(what), step_(step), point_(std::move(point)) {}

  int step() const { return step_; }
  const Vector& point() const { return point_; }

 private:
  int step_;
  Vector point_;
};

/// Regularized Q_uu failed the Cholesky factorization at step k.
class NotPositiveDefinite : public std::runtime_error {
 public:
  explicit NotPositiveDefinite(int step)
      : std::runtime_error("Q_uu + beta*I is not positive definite at step " +
                           std::to_string(step)),
        step_(step) {}

  int step() const { return step_; }

 private:
  int step_;
};

class RegularizationExhausted : public std::runtime_error {
 public:
  explicit RegularizationExhausted(double beta)
      : std::runtime_error("regularization exceeded beta_max (beta=" +
                           std::to_string(beta) + ")"),
        beta_(beta) {}

  double beta() const { return beta_; }

 private:
  double beta_;
};

}  // namespace spdp
