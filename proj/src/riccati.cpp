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

#include "spdp/riccati.hpp"

#include <stdexcept>

namespace spdp {

RiccatiSolution riccati_lqr(const Matrix& A, const Matrix& B, const Matrix& W, const Matrix& W_T,
                            const Matrix& R, int horizon, const Vector& x1) {
  const Eigen::Index n = A.rows();
  const Eigen::Index s = B.cols();
  if (A.cols() != n || B.rows() != n || W.rows() != n || W.cols() != n || W_T.rows() != n ||
      W_T.cols() != n || R.rows() != s || R.cols() != s || x1.size() != n) {
    throw std::invalid_argument("riccati_lqr: shape mismatch");
  }
  if (horizon < 2) throw std::invalid_argument("riccati_lqr: horizon must be >= 2");
  if (Eigen::LLT<Matrix>(R).info() != Eigen::Success) {
    throw std::invalid_argument("riccati_lqr: R must be positive definite");
  }

  const auto T = static_cast<std::size_t>(horizon);
  RiccatiSolution sol;
  sol.gains.resize(T - 1);
  sol.cost_to_go.resize(T);
  sol.cost_to_go[T - 1] = W_T;
  // The control penalty is u^T R u, i.e. 1/2 u^T (2R) u.
  const Matrix R2 = 2.0 * R;
  for (std::size_t k = T - 1; k-- > 0;) {
    const Matrix& P = sol.cost_to_go[k + 1];
    const Matrix M = R2 + B.transpose() * P * B;
    const Matrix K = M.ldlt().solve(B.transpose() * P * A);
    sol.gains[k] = K;
    Matrix Pk = W + A.transpose() * P * A - A.transpose() * P * B * K;
    sol.cost_to_go[k] = 0.5 * (Pk + Pk.transpose());
  }

  sol.states.push_back(x1);
  double J = 0.0;
  for (std::size_t k = 0; k + 1 < T; ++k) {
    const Vector& x = sol.states[k];
    Vector u = -sol.gains[k] * x;
    J += 0.5 * x.dot(W * x) + u.dot(R * u);
    sol.states.push_back(A * x + B * u);
    sol.controls.push_back(std::move(u));
  }
  J += 0.5 * sol.states.back().dot(W_T * sol.states.back());
  sol.cost = J;
  return sol;
}

}  // namespace spdp
