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

#include "spdp/quadrature.hpp"
#include "spdp/types.hpp"

namespace spdp {

/// Second-order Fourier-Hermite coefficients of g with respect to a window
/// N(mu, L L^T):
///
///   a = E[g(y)],  b = E[g(y) H1(z)],  C = E[g(y) H2(z)],  z = L^{-1}(y - mu)
///
/// with H1(z) = z and H2(z) = z z^T - I.
struct FHCoefficients {
  double a = 0.0;
  Vector b;
  Matrix C;

  int dim() const { return static_cast<int>(b.size()); }
};

/// c0 + grad^T d + 1/2 d^T hess d in the deviation d = y - mean.
struct QuadraticModel {
  double c0 = 0.0;
  Vector grad;
  Matrix hess;

  double operator()(const Vector& deviation) const {
    return c0 + grad.dot(deviation) + 0.5 * deviation.dot(hess * deviation);
  }
};

/// Probabilists' Hermite polynomial He_m(x).
double hermite_univariate(int m, double x);

/// Sigma-point estimate of the coefficients. Values are centred on their
/// weighted mean before forming b and C; for rules exact to degree 2 this
/// changes nothing algebraically but removes the cancellation of a large
/// constant part of g.
FHCoefficients fh_coefficients(const ScalarField& g, const GaussianWindow& window,
                               const SigmaRule& rule);

/// Same estimate from precomputed values g(L xi_i + mu), one per sigma point.
FHCoefficients fh_coefficients_from_values(const Vector& values, const SigmaRule& rule);

/// c0 = a - tr(C)/2, grad = L^{-T} b, hess = L^{-T} C L^{-1}.
QuadraticModel fh_quadratic_model(const FHCoefficients& coef, const GaussianWindow& window);

/// Largest |C - C^T| entry observed before symmetrization that still
/// triggers the warning hook.
inline constexpr double kAsymmetryWarnThreshold = 1e-6;

/// Receives a message when a coefficient matrix needed symmetrization beyond
/// kAsymmetryWarnThreshold. Defaults to printing on stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);
void emit_warning(const std::string& message);

}  // namespace spdp
