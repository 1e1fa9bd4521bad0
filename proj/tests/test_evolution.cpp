// Copyright 2026 The openad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "openad/evolution.hpp"
#include "openad/models.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace {

using openad::Complex;
using openad::Matrix;
using openad::Vector;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

openad::DeutschParams deutsch(double gamma, double tau) {
  openad::DeutschParams p;
  p.gamma0 = gamma;
  p.tau = tau;
  return p;
}

TEST(Phase, DeutschBlocks) {
  const auto p = deutsch(0.1, 20.0);
  const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 401));
  for (double s : {0.25, 0.5, 1.0}) {
    const double t = s * p.tau;
    EXPECT_NEAR(std::abs(openad::adiabatic_phase(traj, 0, 0.0, t)), 0.0, 1e-12);
    const Complex ph = openad::adiabatic_phase(traj, 1, 0.0, t);
    EXPECT_NEAR(ph.real(), -2.0 * p.gamma0 * t, 1e-9);
    EXPECT_NEAR(ph.imag(), 0.0, 1e-9);
    // reversed limits flip the sign
    EXPECT_NEAR(std::abs(openad::adiabatic_phase(traj, 1, t, 0.0) + ph), 0.0, 1e-12);
  }
}

TEST(Propagator1d, DeutschMatchesClosedForm) {
  for (double gamma : {0.0, 0.05, 0.1}) {
    const auto p = deutsch(gamma, 20.0);
    const auto grid = openad::numerics::linspace(0.0, 1.0, 401);
    const auto traj = openad::deutsch_trajectory(p, grid);
    const Vector x0 = oracle::components(oracle::bloch(1, 0, 0));
    for (std::size_t j = 0; j < grid.size(); j += 40) {
      const double t = grid[j] * p.tau;
      const Vector x = openad::propagator_1d(traj, 0.0, t).matrix * x0;
      const double decay = std::exp(-2.0 * gamma * t), F = 2.0;
      const Vector expected = oracle::components(oracle::bloch(decay * oracle::g_c(F, t, p.tau), -decay * oracle::g_s(F, t, p.tau), 0));
      EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-8) << "gamma " << gamma << " t " << t;
    }
  }
}

TEST(Propagator1d, LandauZenerMatchesClosedForm) {
  openad::LandauZenerParams p;
  p.gamma0 = 3.0;
  p.tau = 15.0;
  const auto grid = openad::numerics::linspace(0.0, 1.0, 401);
  const auto traj = openad::lz_trajectory(p, grid);
  const Vector x0 = oracle::components(oracle::bloch(0, 0, -1));
  for (std::size_t j = 0; j < grid.size(); j += 50) {
    const double t = grid[j] * p.tau;
    const Vector x = openad::propagator_1d(traj, 0.0, t).matrix * x0;
    const double th = std::atan(std::tan(p.theta_final) * grid[j]);
    const Vector expected = oracle::components(oracle::lz_adiabatic(p.gamma0, th, t));
    EXPECT_LT((x - expected).cwiseAbs().maxCoeff(), 1e-8) << "t " << t;
  }
}

TEST(Propagator1d, IdentityAndInverse) {
  const auto p = deutsch(0.1, 10.0);
  const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 201));
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_LT(max_abs(openad::propagator_1d(traj, 3.0, 3.0).matrix - id), 1e-12);
  for (double t : {2.5, 7.0, 10.0}) {
    const Matrix v = openad::propagator_1d(traj, 0.0, t).matrix;
    const Matrix vi = openad::propagator_1d_inverse(traj, 0.0, t).matrix;
    EXPECT_LT(max_abs(v * vi - id), 1e-10);
    EXPECT_LT(max_abs(vi * v - id), 1e-10);
  }
}

// V^{-1} L(t) V = sum_alpha lambda_alpha(t) |D_alpha(t0)><E_alpha(t0)|.
TEST(Propagator1d, DiagonalizesInFrozenBasis) {
  const auto p = deutsch(0.3, 10.0);
  const auto grid = openad::numerics::linspace(0.0, 1.0, 201);
  const auto traj = openad::deutsch_trajectory(p, grid);
  const std::size_t j0 = 20;
  for (std::size_t j : {std::size_t{60}, std::size_t{200}}) {
    const double t0 = grid[j0] * p.tau, t = grid[j] * p.tau;
    const Matrix v = openad::propagator_1d(traj, t0, t).matrix;
    const Matrix vi = openad::propagator_1d_inverse(traj, t0, t).matrix;
    Matrix expected = Matrix::Zero(4, 4);
    for (std::size_t a = 0; a < 4; ++a) {
      const auto& b0 = traj.bases[j0].blocks[a];
      expected += traj.bases[j].blocks[a].eigenvalue * b0.right_chain[0] * b0.left_chain[0];
    }
    EXPECT_LT(max_abs(vi * traj.generators[j] * v - expected), 1e-10);
  }
}

TEST(Propagator1d, RejectsJordanBlocks) {
  const auto m = synthetic::make(5);
  const auto traj = synthetic::trajectory(m, 1.0, 51);
  EXPECT_THROW(openad::propagator_1d(traj, 0.0, 1.0), openad::WrongKindError);
  EXPECT_THROW(openad::adiabatic_phase(traj, 0, 0.0, 1.0), openad::WrongKindError);
}

TEST(BlockCoefficients, OneDimensionalBlockIsTrivial) {
  const auto p = deutsch(0.1, 10.0);
  const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 201));
  const auto c = openad::block_coefficients(traj, 1, 0.0, 10.0);
  EXPECT_NEAR(std::abs(c.v(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c.v_tilde(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_EQ(c.shift_residual, 0.0);
}

// With a constant chain basis the coupling vanishes and dp/dt = U p.
TEST(BlockCoefficients, NilpotentBlock) {
  const auto d = oracle::defective(0.0, -1.0, -2.0, 3);
  const Matrix r = d.s, l = d.s.inverse();
  const double tau = 4.0;
  const auto traj = openad::trajectory_from_bases(openad::numerics::linspace(0.0, 1.0, 101), tau, [&](double s) {
    openad::JordanBasis b;
    b.time = s;
    openad::JordanBlockChain c0, c1, c2;
    c0.eigenvalue = 0.0;
    c0.right_chain = {r.col(0), r.col(1)};
    c0.left_chain = {l.row(0), l.row(1)};
    c1.eigenvalue = -1.0;
    c1.right_chain = {r.col(2)};
    c1.left_chain = {l.row(2)};
    c2.eigenvalue = -2.0;
    c2.right_chain = {r.col(3)};
    c2.left_chain = {l.row(3)};
    b.blocks = {c0, c1, c2};
    return b;
  });
  for (double t : {0.4, 2.0, 4.0}) {
    const auto c = openad::block_coefficients(traj, 0, 0.0, t);
    Matrix expected(2, 2);
    expected << 1.0, t, 0.0, 1.0;
    EXPECT_LT(max_abs(c.v - expected), 1e-12);
    EXPECT_LT(c.shift_residual, 1e-12);
  }
}

TEST(BlockCoefficients, AgreesWithFineOdeSolve) {
  const auto m = synthetic::make(11);
  const double tau = 3.0;
  for (std::size_t n : {201u, 801u}) {
    const auto traj = synthetic::trajectory(m, tau, n);
    const auto c = openad::block_coefficients(traj, 0, 0.0, tau);
    EXPECT_LT(c.inverse_residual, 1e-12);

    // Oracle: RK4 on dp/ds = [tau U - K^{-1} K'] p with K' by complex-step-free central differences.
    auto coupling = [&](double s) {
      const double h = 1e-5;
      const Matrix k = m.gauge(s).topLeftCorner(2, 2);
      const Matrix dk = (m.gauge(s + h) - m.gauge(s - h)).topLeftCorner(2, 2) / (2 * h);
      Matrix u = Matrix::Zero(2, 2);
      u(0, 1) = 1.0;
      return Matrix(tau * u - k.inverse() * dk);
    };
    Matrix p = Matrix::Identity(2, 2);
    const int steps = 4000;
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
      const double s = i * h;
      const Matrix k1 = coupling(s) * p;
      const Matrix k2 = coupling(s + h / 2) * (p + h / 2 * k1);
      const Matrix k3 = coupling(s + h / 2) * (p + h / 2 * k2);
      const Matrix k4 = coupling(s + h) * (p + h * k3);
      p += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    EXPECT_LT(max_abs(c.v - p), n == 201 ? 1e-3 : 1e-4) << n;
  }
}

TEST(BlockCoefficients, GenericGaugeBreaksShift) {
  const auto m = synthetic::make(11, true);
  const auto traj = synthetic::trajectory(m, 2.0, 201);
  const auto c = openad::block_coefficients(traj, 0, 0.0, 2.0);
  EXPECT_GT(c.shift_residual, 1e-4);
  EXPECT_THROW(openad::block_coefficients(traj, 0, 0.0, 2.0, {true, 1e-8}), openad::CoefficientError);
  EXPECT_THROW(openad::propagator_multiblock(traj, 0.0, 2.0, {true, 1e-8}), openad::CoefficientError);
}

TEST(Multiblock, ReducesToOneDimensional) {
  const auto p = deutsch(0.1, 10.0);
  const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 201));
  for (double t : {0.0, 4.0, 10.0}) {
    EXPECT_LT(max_abs(openad::propagator_multiblock(traj, 0.0, t).matrix - openad::propagator_1d(traj, 0.0, t).matrix), 1e-12);
    EXPECT_LT(max_abs(openad::propagator_multiblock_inverse(traj, 0.0, t).matrix -
                      openad::propagator_1d_inverse(traj, 0.0, t).matrix),
              1e-12);
  }
}

TEST(Multiblock, BlockDiagonalizesDefectiveGenerator) {
  const auto m = synthetic::make(7);
  const double tau = 2.5;
  const auto grid = openad::numerics::linspace(0.0, 1.0, 201);
  const auto traj = synthetic::trajectory(m, tau, grid.size());
  const std::size_t j0 = 10;
  const double t0 = grid[j0] * tau;
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_LT(max_abs(openad::propagator_multiblock(traj, t0, t0).matrix - id), 1e-12);
  for (std::size_t j : {std::size_t{50}, std::size_t{200}}) {
    const double t = grid[j] * tau;
    const Matrix v = openad::propagator_multiblock(traj, t0, t).matrix;
    const Matrix vi = openad::propagator_multiblock_inverse(traj, t0, t).matrix;
    EXPECT_LT(max_abs(v * vi - id), 1e-10);
    const Matrix r0 = m.right(grid[j0]);
    const Matrix frozen = r0.inverse() * vi * m.generator(grid[j]) * v * r0;
    Matrix expected = m.jordan(grid[j]);
    EXPECT_LT(max_abs(frozen - expected), 1e-8) << "t " << t;
    EXPECT_NEAR(std::abs(frozen(0, 1) - 1.0), 0.0, 1e-8);
  }
}

TEST(Master, PureDephasing) {
  openad::LindbladModel m;
  const double gamma = 0.3;
  m.horizon = 5.0;
  m.jump_ops.push_back([gamma](double) -> Matrix { return std::sqrt(gamma) * oracle::sz(); });
  const auto times = openad::numerics::linspace(0.0, 5.0, 11);
  const auto sol = openad::solve_master(m, oracle::bloch(1, 0, 0), times);
  ASSERT_EQ(sol.states.size(), times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    EXPECT_NEAR(sol.states[j][1].real(), std::exp(-2 * gamma * times[j]), 1e-8);
    EXPECT_NEAR(std::abs(sol.states[j][0] - 1.0), 0.0, 1e-10);
  }
}

TEST(Master, ConstantWithoutDynamics) {
  openad::LindbladModel m;
  m.horizon = 3.0;
  std::mt19937_64 rng(4);
  const Matrix rho = oracle::random_density(2, rng);
  const auto sol = openad::solve_master(m, rho, {0.0, 3.0});
  EXPECT_LT((sol.states.back().components() - oracle::components(rho)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Master, MatchesMatrixExponential) {
  std::mt19937_64 rng(8);
  const Matrix h = oracle::random_hermitian(2, rng), g = oracle::random_hermitian(2, rng) * 0.3;
  openad::LindbladModel m;
  m.horizon = 4.0;
  m.hamiltonian = [h](double) { return h; };
  m.jump_ops.push_back([g](double) { return g; });
  const Matrix rho = oracle::random_density(2, rng);
  const auto sol = openad::solve_master(m, rho, {0.0, 4.0});
  const Vector expected = oracle::evolve_constant(oracle::superoperator(h, {g}), oracle::components(rho), 4.0);
  EXPECT_LT((sol.states.back().components() - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Master, ClosedDeutschFollowsGroundState) {
  const auto p = deutsch(0.0, 200.0);
  const auto sol = openad::solve_master(openad::deutsch_model(p), openad::deutsch_initial_state(), {0.0, p.tau});
  const Matrix rho = openad::devectorize(sol.states.back(), openad::pauli_basis(1));
  EXPECT_LT(1.0 - openad::fidelity(rho, openad::deutsch_closed_system_state(p, p.tau)), 1e-4);
}

TEST(Master, ApproachesAdiabaticPropagation) {
  double previous = 1.0;
  for (double tau : {10.0, 40.0, 160.0}) {
    const auto p = deutsch(0.1, tau);
    const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 801));
    const Vector x0 = oracle::components(openad::deutsch_initial_state());
    const auto sol = openad::solve_master(openad::deutsch_model(p), openad::deutsch_initial_state(), {0.0, tau});
    const double gap = (sol.states.back().components() - openad::propagator_1d(traj, 0.0, tau).matrix * x0).cwiseAbs().maxCoeff();
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(Master, Errors) {
  const auto model = openad::deutsch_model(deutsch(0.1, 5.0));
  EXPECT_THROW(openad::solve_master(model, 2.0 * oracle::bloch(1, 0, 0), {0.0, 5.0}), openad::InvalidStateError);
  Matrix bad(2, 2);
  bad << 1.5, 0, 0, -0.5;
  EXPECT_THROW(openad::solve_master(model, bad, {0.0, 5.0}), openad::InvalidStateError);
  EXPECT_THROW(openad::solve_master(model, oracle::bloch(1, 0, 0), {0.0, 6.0}), openad::DomainError);
  openad::SolveOptions tight;
  tight.min_steps = 16;
  tight.max_steps = 16;
  EXPECT_THROW(openad::solve_master(model, oracle::bloch(1, 0, 0), {0.0, 5.0}, tight), openad::IntegrationError);
}

TEST(Master, FourthOrderConvergence) {
  const auto p = deutsch(0.1, 10.0);
  const auto model = openad::deutsch_model(p);
  const auto basis = openad::pauli_basis(1);
  auto l = [&](double t) { return openad::superoperator_matrix(model, t, basis).matrix; };
  const Vector x0 = oracle::components(openad::deutsch_initial_state());
  const Vector a = openad::rk4_endpoint(l, x0, 0.0, 10.0, 40), b = openad::rk4_endpoint(l, x0, 0.0, 10.0, 80),
               c = openad::rk4_endpoint(l, x0, 0.0, 10.0, 160);
  const double order = std::log2((a - b).norm() / (b - c).norm());
  EXPECT_GE(order, 3.8);
  EXPECT_LT(std::abs(c(0) - 1.0), 1e-12);
}

TEST(Fidelity, Values) {
  const Matrix plus = oracle::bloch(1, 0, 0), zero = oracle::bloch(0, 0, 1), one = oracle::bloch(0, 0, -1);
  EXPECT_NEAR(openad::fidelity(plus, plus), 1.0, 1e-12);
  EXPECT_NEAR(openad::fidelity(zero, one), 0.0, 1e-12);
  EXPECT_NEAR(openad::fidelity(zero, plus), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(openad::fidelity(oracle::id2() / 2.0, zero), 1.0 / std::sqrt(2.0), 1e-12);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Matrix r = oracle::random_density(2, rng), s = oracle::random_density(2, rng);
    EXPECT_NEAR(openad::fidelity(r, s), openad::fidelity(s, r), 1e-10);
    const double f = openad::fidelity(r, s);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  Matrix nh(2, 2);
  nh << 0.5, 0.3, 0.0, 0.5;
  EXPECT_THROW(openad::fidelity(nh, plus), openad::InvalidStateError);
}

TEST(Curve, DeutschDecreasesWithTau) {
  auto model_for = [](double tau) { return openad::deutsch_model(deutsch(0.1, tau)); };
  auto target_for = [](double tau) { return openad::deutsch_target(deutsch(0.1, tau)); };
  const std::vector<double> taus{0.5, 10.0, 30.0, 50.0};
  const auto curve = openad::infidelity_curve(model_for, openad::deutsch_initial_state(), target_for, taus, 1);
  ASSERT_EQ(curve.size(), taus.size());
  EXPECT_GT(curve[0].infidelity, 0.3);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_EQ(curve[i].tau, taus[i]);
    EXPECT_LT(curve[i].infidelity, curve[i - 1].infidelity);
  }
  const auto threaded = openad::infidelity_curve(model_for, openad::deutsch_initial_state(), target_for, taus, 3);
  for (std::size_t i = 0; i < curve.size(); ++i) EXPECT_EQ(threaded[i].infidelity, curve[i].infidelity);

  std::ostringstream os;
  openad::write_curve(os, curve, 1.0, 0.1, "deutsch");
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "omega_tau,infidelity,gamma0,model");
}

}  // namespace
