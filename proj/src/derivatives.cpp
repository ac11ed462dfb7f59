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

#include "spdp/derivatives.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spdp/errors.hpp"
#include "spdp/fourier_hermite.hpp"

namespace spdp {

namespace fd {

namespace {

const double kEps = std::numeric_limits<double>::epsilon();

double step(double scale, double zi) { return scale * std::max(1.0, std::abs(zi)); }

}  // namespace

Matrix jacobian(const VectorField& fn, const Vector& z) {
  const double scale = std::cbrt(kEps);
  const Eigen::Index dim = z.size();
  Matrix J;
  Vector zp = z;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double h = step(scale, z(j));
    zp(j) = z(j) + h;
    const Vector fp = fn(zp);
    zp(j) = z(j) - h;
    const Vector fm = fn(zp);
    zp(j) = z(j);
    if (j == 0) J.resize(fp.size(), dim);
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

std::vector<Matrix> hessians(const VectorField& fn, const Vector& z) {
  const double scale = std::pow(kEps, 0.25);
  const Eigen::Index dim = z.size();
  Vector h(dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i) = step(scale, z(i));

  auto inner = [&](const Vector& zc) {
    Matrix J;
    Vector zp = zc;
    for (Eigen::Index j = 0; j < dim; ++j) {
      zp(j) = zc(j) + h(j);
      const Vector fp = fn(zp);
      zp(j) = zc(j) - h(j);
      const Vector fm = fn(zp);
      zp(j) = zc(j);
      if (j == 0) J.resize(fp.size(), dim);
      J.col(j) = (fp - fm) / (2.0 * h(j));
    }
    return J;
  };

  std::vector<Matrix> H;
  Vector zp = z;
  for (Eigen::Index i = 0; i < dim; ++i) {
    zp(i) = z(i) + h(i);
    const Matrix Jp = inner(zp);
    zp(i) = z(i) - h(i);
    const Matrix Jm = inner(zp);
    zp(i) = z(i);
    if (i == 0) H.assign(static_cast<std::size_t>(Jp.rows()), Matrix::Zero(dim, dim));
    const Matrix dJ = (Jp - Jm) / (2.0 * h(i));
    for (Eigen::Index m = 0; m < dJ.rows(); ++m) H[static_cast<std::size_t>(m)].row(i) = dJ.row(m);
  }
  for (auto& Hm : H) {
    const double residual = (Hm - Hm.transpose()).cwiseAbs().maxCoeff();
    if (residual > 1e-6 * std::max(1.0, Hm.cwiseAbs().maxCoeff())) {
      emit_warning("finite-difference Hessian symmetry residual " + std::to_string(residual));
    }
    Hm = 0.5 * (Hm + Hm.transpose()).eval();
  }
  return H;
}

}  // namespace fd

namespace {

void require_finite(const Matrix& M, const char* block, int k) {
  if (!M.allFinite()) {
    throw NonFiniteError(std::string("non-finite derivative block ") + block + " at step " +
                             std::to_string(k),
                         k);
  }
}

Vector join(const Vector& x, const Vector& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

CostExpansion fd_cost(const ControlProblem& p, int k, const Vector& x, const Vector& u) {
  const Eigen::Index n = x.size();
  const Eigen::Index s = u.size();
  fd::VectorField g = [&](const Vector& z) {
    Vector out(1);
    out(0) = p.stage_cost(k, z.head(n), z.tail(s));
    return out;
  };
  const Vector z = join(x, u);
  const Matrix J = fd::jacobian(g, z);
  const Matrix H = fd::hessians(g, z).front();
  CostExpansion e;
  e.L_x = J.row(0).head(n).transpose();
  e.L_u = J.row(0).tail(s).transpose();
  e.L_xx = H.topLeftCorner(n, n);
  e.L_xu = H.topRightCorner(n, s);
  e.L_uu = H.bottomRightCorner(s, s);
  return e;
}

DynamicsExpansion fd_dynamics(const ControlProblem& p, int k, const Vector& x, const Vector& u) {
  const Eigen::Index n = x.size();
  const Eigen::Index s = u.size();
  fd::VectorField f = [&](const Vector& z) { return p.dynamics(k, z.head(n), z.tail(s)); };
  const Vector z = join(x, u);
  const Matrix J = fd::jacobian(f, z);
  const std::vector<Matrix> H = fd::hessians(f, z);
  DynamicsExpansion e;
  e.F_x = J.leftCols(n);
  e.F_u = J.rightCols(s);
  for (const Matrix& Hm : H) {
    e.F_xx.push_back(Hm.topLeftCorner(n, n));
    e.F_xu.push_back(Hm.topRightCorner(n, s));
    e.F_uu.push_back(Hm.bottomRightCorner(s, s));
  }
  return e;
}

}  // namespace

StageDerivatives stage_derivatives(const ControlProblem& problem, int k, const Vector& x,
                                   const Vector& u, DerivativeProvider provider) {
  const bool analytic = provider == DerivativeProvider::analytic;
  StageDerivatives d;
  d.cost = (analytic && problem.stage_cost_derivatives) ? problem.stage_cost_derivatives(k, x, u)
                                                        : fd_cost(problem, k, x, u);
  d.dynamics = (analytic && problem.dynamics_derivatives) ? problem.dynamics_derivatives(k, x, u)
                                                          : fd_dynamics(problem, k, x, u);
  require_finite(d.cost.L_x, "L_x", k);
  require_finite(d.cost.L_u, "L_u", k);
  require_finite(d.cost.L_xx, "L_xx", k);
  require_finite(d.cost.L_xu, "L_xu", k);
  require_finite(d.cost.L_uu, "L_uu", k);
  require_finite(d.dynamics.F_x, "F_x", k);
  require_finite(d.dynamics.F_u, "F_u", k);
  for (std::size_t m = 0; m < d.dynamics.F_xx.size(); ++m) {
    require_finite(d.dynamics.F_xx[m], "F_xx", k);
    require_finite(d.dynamics.F_xu[m], "F_xu", k);
    require_finite(d.dynamics.F_uu[m], "F_uu", k);
  }
  return d;
}

TerminalDerivatives terminal_derivatives(const ControlProblem& problem, const Vector& x,
                                         DerivativeProvider provider) {
  const int kT = problem.horizon - 1;
  TerminalDerivatives d;
  if (provider == DerivativeProvider::analytic && problem.terminal_cost_derivatives) {
    d = problem.terminal_cost_derivatives(x);
  } else {
    fd::VectorField g = [&](const Vector& z) {
      Vector out(1);
      out(0) = problem.terminal_cost(z);
      return out;
    };
    d.value = problem.terminal_cost(x);
    d.L_x = fd::jacobian(g, x).row(0).transpose();
    d.L_xx = fd::hessians(g, x).front();
  }
  if (!std::isfinite(d.value)) throw NonFiniteError("non-finite terminal cost", kT, x);
  require_finite(d.L_x, "terminal L_x", kT);
  require_finite(d.L_xx, "terminal L_xx", kT);
  return d;
}

}  // namespace spdp
