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

#include <functional>
#include <vector>

#include "spdp/ocp.hpp"
#include "spdp/types.hpp"

namespace spdp {

enum class DerivativeProvider {
  analytic,           // closed forms where the problem registers them, else FD
  finite_difference,  // central differences everywhere
};

struct StageDerivatives {
  CostExpansion cost;
  DynamicsExpansion dynamics;
};

using TerminalDerivatives = TerminalExpansion;

StageDerivatives stage_derivatives(const ControlProblem& problem, int k, const Vector& x,
                                   const Vector& u,
                                   DerivativeProvider provider = DerivativeProvider::analytic);

TerminalDerivatives terminal_derivatives(const ControlProblem& problem, const Vector& x,
                                         DerivativeProvider provider = DerivativeProvider::analytic);

namespace fd {

using VectorField = std::function<Vector(const Vector&)>;

/// Central-difference Jacobian (outputs x inputs), step cbrt(eps) max(1, |z_i|).
Matrix jacobian(const VectorField& fn, const Vector& z);

/// Per-output Hessians by central differences of the central-difference
/// Jacobian, step eps^(1/4) max(1, |z_i|) at both levels. Symmetrized.
std::vector<Matrix> hessians(const VectorField& fn, const Vector& z);

}  // namespace fd

}  // namespace spdp
