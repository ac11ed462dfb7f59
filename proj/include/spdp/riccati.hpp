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

#include <vector>

#include "spdp/types.hpp"

namespace spdp {

/// Finite-horizon LQR by the backward Riccati recursion, for
///
///   J = 1/2 x_T^T W_T x_T + sum_k (1/2 x_k^T W x_k + u_k^T R u_k),
///   x_{k+1} = A x_k + B u_k.
///
/// The optimal law is u_k = -gains[k] x_k. Used as an independent oracle for
/// the iterative solvers.
struct RiccatiSolution {
  double cost = 0.0;
  std::vector<Matrix> gains;       // T - 1 entries, s x n
  std::vector<Matrix> cost_to_go;  // T entries, P_1 .. P_T
  std::vector<Vector> states;
  std::vector<Vector> controls;
};

/// Throws std::invalid_argument if R is not positive definite or shapes
/// disagree.
RiccatiSolution riccati_lqr(const Matrix& A, const Matrix& B, const Matrix& W, const Matrix& W_T,
                            const Matrix& R, int horizon, const Vector& x1);

}  // namespace spdp
