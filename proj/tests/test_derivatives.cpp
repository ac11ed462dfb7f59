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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spdp/derivatives.hpp"
#include "spdp/errors.hpp"
#include "spdp/models.hpp"
#include "support/oracles.hpp"

namespace spdp {
namespace {

// Hyper-dual number a + b e1 + c e2 + d e1 e2 with e1^2 = e2^2 = 0. Seeding
// e1 along z_i and e2 along z_j yields df/dz_i in b and d2f/dz_i dz_j in d,
// free of truncation error.
struct HyperDual {
  double a = 0, b = 0, c = 0, d = 0;

  HyperDual() = default;
  HyperDual(double v) : a(v) {}  // NOLINT(google-explicit-constructor)
  HyperDual(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
};

HyperDual operator+(HyperDual x, HyperDual y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
HyperDual operator-(HyperDual x, HyperDual y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
HyperDual operator*(HyperDual x, HyperDual y) {
  return {x.a * y.a, x.a * y.b + x.b * y.a, x.a * y.c + x.c * y.a,
          x.a * y.d + x.b * y.c + x.c * y.b + x.d * y.a};
}
HyperDual operator/(HyperDual x, double s) { return {x.a / s, x.b / s, x.c / s, x.d / s}; }
HyperDual sin(HyperDual x) {
  const double s = std::sin(x.a), c = std::cos(x.a);
  return {s, c * x.b, c * x.c, c * x.d - s * x.b * x.c};
}

template <class T>
std::array<T, 2> pendulum_rhs(const PendulumParams& p, const std::array<T, 2>& x, const T& u) {
  return {x[1], T(-p.g * p.l / p.a) * sin(x[0]) - T(p.b / p.a) * x[1] + u / p.a};
}

template <class T>
std::array<T, 2> pendulum_rk4(const PendulumParams& p, double dt, const std::array<T, 2>& x, const T& u) {
  auto axpy = [](const std::array<T, 2>& s, double h, const std::array<T, 2>& k) {
    return std::array<T, 2>{s[0] + T(h) * k[0], s[1] + T(h) * k[1]};
  };
  auto k1 = pendulum_rhs(p, x, u);
  auto k2 = pendulum_rhs(p, axpy(x, dt / 2, k1), u);
  auto k3 = pendulum_rhs(p, axpy(x, dt / 2, k2), u);
  auto k4 = pendulum_rhs(p, axpy(x, dt, k3), u);
  std::array<T, 2> out;
  for (int i = 0; i < 2; ++i) out[i] = x[i] + T(dt / 6) * (k1[i] + T(2.0) * k2[i] + T(2.0) * k3[i] + k4[i]);
  return out;
}

// Jacobian (2 x 3) and per-output Hessians (3 x 3) in z = (theta, omega, u).
void hyperdual_pendulum(const PendulumParams& p, double dt, const Vector& z, Matrix& J,
                        std::vector<Matrix>& H) {
  J = Matrix::Zero(2, 3);
  H.assign(2, Matrix::Zero(3, 3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::array<HyperDual, 3> v;
      for (int k = 0; k < 3; ++k) v[k] = HyperDual(z(k), k == i ? 1.0 : 0.0, k == j ? 1.0 : 0.0, 0.0);
      auto out = pendulum_rk4<HyperDual>(p, dt, {v[0], v[1]}, v[2]);
      for (int m = 0; m < 2; ++m) {
        J(m, i) = out[m].b;
        H[m](i, j) = out[m].d;
      }
    }
  }
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double rel_gap(const Matrix& a, const Matrix& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

TEST(HyperDualOracle, MatchesClosedFormOnSine) {
  HyperDual x(0.7, 1.0, 1.0, 0.0);
  HyperDual y = sin(x) * x;  // f = x sin x
  EXPECT_NEAR(y.b, std::sin(0.7) + 0.7 * std::cos(0.7), 1e-15);
  EXPECT_NEAR(y.d, 2 * std::cos(0.7) - 0.7 * std::sin(0.7), 1e-15);
}

TEST(FiniteDifference, PendulumStepMatchesHyperDualOracle) {
  PendulumParams params;
  BenchmarkProblem b = pendulum_benchmark(params);
  const Vector x = vec({1.0, 0.5});
  const Vector u = vec({0.0});
  StageDerivatives fd = stage_derivatives(b.problem, 0, x, u, DerivativeProvider::finite_difference);

  Matrix J;
  std::vector<Matrix> H;
  hyperdual_pendulum(params, 0.1, vec({1.0, 0.5, 0.0}), J, H);
  EXPECT_LE(rel_gap(fd.dynamics.F_x, J.leftCols(2)), 1e-5);
  EXPECT_LE(rel_gap(fd.dynamics.F_u, J.rightCols(1)), 1e-5);
  for (int m = 0; m < 2; ++m) {
    EXPECT_LE(rel_gap(fd.dynamics.F_xx[m], H[m].topLeftCorner(2, 2)), 1e-5) << m;
    EXPECT_LE(rel_gap(fd.dynamics.F_xu[m], H[m].topRightCorner(2, 1)), 1e-5) << m;
    EXPECT_LE(rel_gap(fd.dynamics.F_uu[m], H[m].bottomRightCorner(1, 1)), 1e-5) << m;
  }
}

TEST(FiniteDifference, PendulumRandomPointsMatchOracle) {
  PendulumParams params;
  BenchmarkProblem b = pendulum_benchmark(params);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    Vector z = oracle::random_vector(3, 4.0, rng);
    StageDerivatives fd = stage_derivatives(b.problem, 0, z.head(2), z.tail(1), DerivativeProvider::finite_difference);
    Matrix J;
    std::vector<Matrix> H;
    hyperdual_pendulum(params, 0.1, z, J, H);
    ASSERT_LE(rel_gap(fd.dynamics.F_x, J.leftCols(2)), 1e-5);
    ASSERT_LE(rel_gap(fd.dynamics.F_u, J.rightCols(1)), 1e-5);
    for (int m = 0; m < 2; ++m) ASSERT_LE(rel_gap(fd.dynamics.F_xx[m], H[m].topLeftCorner(2, 2)), 1e-5);
  }
}

TEST(FiniteDifference, TensorsAreSymmetric) {
  BenchmarkProblem b = cartpole_benchmark();
  StageDerivatives fd = stage_derivatives(b.problem, 3, vec({0.1, 2.0, -0.5, 1.0}), vec({3.0}),
                                          DerivativeProvider::finite_difference);
  for (const auto& h : fd.dynamics.F_xx) EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-6);
  for (const auto& h : fd.dynamics.F_uu) EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE((fd.cost.L_xx - fd.cost.L_xx.transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(FiniteDifference, JacobianAndHessiansOfPolynomialMap) {
  auto f = [](const Vector& z) {
    Vector o(2);
    o << z(0) * z(0) * z(1), z(1) * z(1) * z(1) - 2 * z(0);
    return o;
  };
  Vector z = vec({1.5, -0.5});
  Matrix J = fd::jacobian(f, z);
  Matrix J_true(2, 2);
  J_true << 2 * z(0) * z(1), z(0) * z(0), -2, 3 * z(1) * z(1);
  EXPECT_LE((J - J_true).cwiseAbs().maxCoeff(), 1e-9);
  auto H = fd::hessians(f, z);
  ASSERT_EQ(H.size(), 2u);
  Matrix H0(2, 2), H1(2, 2);
  H0 << 2 * z(1), 2 * z(0), 2 * z(0), 0;
  H1 << 0, 0, 0, 6 * z(1);
  EXPECT_LE((H[0] - H0).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE((H[1] - H1).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Analytic, LinearDynamicsHaveNoCurvature) {
  BenchmarkProblem b = lqr_benchmark();
  LinearSystem sys = lqr_test_system(0.1);
  for (DerivativeProvider p : {DerivativeProvider::analytic, DerivativeProvider::finite_difference}) {
    StageDerivatives d = stage_derivatives(b.problem, 0, vec({0.3, -1.0}), vec({2.0}), p);
    EXPECT_LE((d.dynamics.F_x - sys.A).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((d.dynamics.F_u - sys.B).cwiseAbs().maxCoeff(), 1e-9);
    for (const auto& h : d.dynamics.F_xx) EXPECT_LE(h.cwiseAbs().maxCoeff(), 1e-6);
    for (const auto& h : d.dynamics.F_xu) EXPECT_LE(h.cwiseAbs().maxCoeff(), 1e-6);
    for (const auto& h : d.dynamics.F_uu) EXPECT_LE(h.cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Analytic, QuadraticCostBlocks) {
  BenchmarkProblem b = pendulum_benchmark();
  StageDerivatives d = stage_derivatives(b.problem, 0, vec({0.2, 0.1}), vec({0.5}));
  EXPECT_EQ(d.cost.L_xx, b.cost.W);
  EXPECT_EQ(d.cost.L_uu, 2.0 * b.cost.R);
  EXPECT_EQ(d.cost.L_xu.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Analytic, QuadraticTerminal) {
  BenchmarkProblem b = cartpole_benchmark();
  Vector x = vec({0.5, 2.0, 0.1, -0.2});
  TerminalDerivatives t = terminal_derivatives(b.problem, x);
  EXPECT_LE((t.L_x - b.cost.W_T * (x - b.cost.x_goal)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(t.L_xx, b.cost.W_T);
  TerminalDerivatives at_goal = terminal_derivatives(b.problem, b.cost.x_goal);
  EXPECT_EQ(at_goal.L_x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Analytic, CubicTerminalByFiniteDifferences) {
  ControlProblem p;
  p.horizon = 2;
  p.state_dim = 1;
  p.control_dim = 1;
  p.dynamics = [](int, const Vector& x, const Vector&) { return x; };
  p.stage_cost = [](int, const Vector&, const Vector&) { return 0.0; };
  p.terminal_cost = [](const Vector& x) { return x(0) * x(0) * x(0); };
  TerminalDerivatives t = terminal_derivatives(p, vec({2.0}));
  EXPECT_DOUBLE_EQ(t.value, 8.0);
  EXPECT_NEAR(t.L_x(0), 12.0, 1e-8);
  EXPECT_NEAR(t.L_xx(0, 0), 12.0, 1e-5);
}

TEST(Analytic, AgreesWithFiniteDifferencesOnRegisteredProblems) {
  std::mt19937_64 rng(4);
  for (BenchmarkProblem b : {pendulum_benchmark(), cartpole_benchmark(), lqr_benchmark()}) {
    const int n = b.problem.state_dim;
    for (int t = 0; t < 100; ++t) {
      Vector x = oracle::random_vector(n, 3.0, rng);
      Vector u = oracle::random_vector(1, 5.0, rng);
      StageDerivatives a = stage_derivatives(b.problem, 0, x, u, DerivativeProvider::analytic);
      StageDerivatives f = stage_derivatives(b.problem, 0, x, u, DerivativeProvider::finite_difference);
      ASSERT_LE(rel_gap(f.cost.L_x, a.cost.L_x), 1e-5);
      ASSERT_LE(rel_gap(f.cost.L_u, a.cost.L_u), 1e-5);
      ASSERT_LE(rel_gap(f.cost.L_xx, a.cost.L_xx), 1e-5);
      ASSERT_LE(rel_gap(f.cost.L_uu, a.cost.L_uu), 1e-5);
      ASSERT_LE(rel_gap(f.cost.L_xu, a.cost.L_xu), 1e-5);
      ASSERT_LE(rel_gap(f.dynamics.F_x, a.dynamics.F_x), 1e-5);
      ASSERT_LE(rel_gap(f.dynamics.F_u, a.dynamics.F_u), 1e-5);
      TerminalDerivatives ta = terminal_derivatives(b.problem, x, DerivativeProvider::analytic);
      TerminalDerivatives tf = terminal_derivatives(b.problem, x, DerivativeProvider::finite_difference);
      ASSERT_LE(rel_gap(tf.L_x, ta.L_x), 1e-5);
      ASSERT_LE(rel_gap(tf.L_xx, ta.L_xx), 1e-5);
    }
  }
}

TEST(Errors, NonFiniteBlockIsNamed) {
  ControlProblem p;
  p.horizon = 2;
  p.state_dim = 1;
  p.control_dim = 1;
  p.dynamics = [](int, const Vector& x, const Vector& u) { return Vector(x + u); };
  p.stage_cost = [](int, const Vector& x, const Vector&) { return std::sqrt(x(0)); };
  p.terminal_cost = [](const Vector&) { return 0.0; };
  try {
    stage_derivatives(p, 0, vec({0.0}), vec({0.0}), DerivativeProvider::finite_difference);
    FAIL();
  } catch (const NonFiniteError& e) {
    EXPECT_NE(std::string(e.what()).find("L_"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace spdp
