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
#include "openad/thermo.hpp"
#include "oracles.hpp"

namespace {

using openad::Complex;
using openad::Matrix;
using openad::Vector;

Matrix log_herm(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  return es.eigenvectors() * es.eigenvalues().array().log().matrix().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

openad::LindbladModel random_model(Eigen::Index d, std::mt19937_64& rng) {
  const Matrix h = oracle::random_hermitian(d, rng);
  Matrix g = oracle::random_hermitian(d, rng);
  g += Complex(0, 0.5) * oracle::random_hermitian(d, rng);
  openad::LindbladModel m;
  m.dim_s = static_cast<std::size_t>(d);
  m.hamiltonian = [h](double) { return h; };
  m.jump_ops.push_back([g](double) { return g; });
  return m;
}

Matrix ramp(double t) { return 0.5 * (1.0 + 0.05 * t) * oracle::sz() + 0.2 * oracle::sx(); }

TEST(Vectors, Components) {
  const auto basis = openad::pauli_basis(1);
  const Matrix h = 0.3 * oracle::sx() - 1.1 * oracle::sz() + 0.4 * oracle::id2();
  const auto hv = openad::h_vector(h, basis);
  EXPECT_NEAR(std::abs(hv(0) - 0.8), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hv(1) - 0.6), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hv(2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hv(3) + 2.2), 0.0, 1e-15);

  const double p = 0.8;
  const auto lv = openad::rho_log_vector(oracle::bloch(0, 0, 2 * p - 1), basis);
  EXPECT_NEAR(lv(0).real(), std::log(p) + std::log(1 - p), 1e-14);
  EXPECT_NEAR(lv(3).real(), std::log(p) - std::log(1 - p), 1e-14);
  EXPECT_THROW(openad::rho_log_vector(oracle::bloch(1, 0, 0), basis), openad::LogDomainError);
}

TEST(Rates, MatchOperatorTraces) {
  std::mt19937_64 rng(13);
  for (Eigen::Index d : {2, 4}) {
    const auto basis = openad::pauli_basis_for_dim(static_cast<std::size_t>(d));
    for (int trial = 0; trial < 10; ++trial) {
      const auto model = random_model(d, rng);
      const Matrix h = oracle::random_hermitian(d, rng), rho = oracle::random_density(d, rng);
      const Matrix l = openad::superoperator_matrix(model, 0.0, basis).matrix;
      const Vector x = openad::vectorize(rho, basis).components();
      const Matrix drho = openad::generator_action(model, 0.0, rho);
      const double dq = (h * drho).trace().real(), ds = -(log_herm(rho) * drho).trace().real();
      EXPECT_NEAR(openad::heat_rate_vector(openad::h_vector(h, basis), l, x, basis.dim_s()), dq, 1e-11);
      EXPECT_NEAR(openad::entropy_rate_vector(openad::rho_log_vector(rho, basis), l, x, basis.dim_s()), ds, 1e-10);
    }
  }
}

TEST(Gibbs, LogIdentity) {
  std::mt19937_64 rng(3);
  for (Eigen::Index d : {2, 4}) {
    const auto basis = openad::pauli_basis_for_dim(static_cast<std::size_t>(d));
    for (double beta : {0.0, 0.3, 2.0, 7.0}) {
      const Matrix h = oracle::random_hermitian(d, rng);
      Eigen::SelfAdjointEigenSolver<Matrix> es(openad::gibbs_state(h, beta), Eigen::EigenvaluesOnly);
      const double p_min = es.eigenvalues().minCoeff();
      if (p_min < 1e-14) {
        EXPECT_THROW(openad::gibbs_identity_error(h, beta, basis), openad::LogDomainError);
        continue;
      }
      // log of the smallest population limits the precision
      EXPECT_LT(openad::gibbs_identity_error(h, beta, basis), 1e-14 / p_min) << d << " " << beta;
    }
  }
}

TEST(Thermalizing, GibbsStateIsStationary) {
  for (std::size_t d : {2u, 4u}) {
    std::mt19937_64 rng(d);
    const Matrix h0 = oracle::random_hermitian(static_cast<Eigen::Index>(d), rng);
    const Matrix h1 = oracle::random_hermitian(static_cast<Eigen::Index>(d), rng);
    auto path = [h0, h1](double t) -> Matrix { return h0 + 0.1 * t * h1; };
    const auto model = openad::thermalizing_model(path, d, 1.3, 5.0, 0.7);
    for (double t : {0.0, 2.0, 5.0}) {
      const Matrix rho = openad::gibbs_state(path(t), 1.3);
      EXPECT_LT(openad::generator_action(model, t, rho).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Equilibrium, EntropyIsBetaTimesHeat) {
  const auto times = openad::numerics::linspace(0.0, 10.0, 21);
  for (double beta : {0.5, 1.0, 4.0}) {
    const auto rep = openad::equilibrium_check(ramp, 2, beta, times);
    ASSERT_EQ(rep.samples.size(), times.size());
    EXPECT_LT(rep.relative_residual, 1e-8) << beta;
    for (const auto& s : rep.samples) {
      // quasi-static heat tr(H d rho_eq/dt) = -beta a a' sech^2(beta E) for H = a sigma_z + b sigma_x
      const double a = 0.5 * (1.0 + 0.05 * s.t), e = std::hypot(a, 0.2), ch = std::cosh(beta * e);
      const double dq = -beta * a * 0.025 / (ch * ch);
      EXPECT_NEAR(s.dq_rate, dq, 1e-7 * std::abs(dq)) << "t " << s.t;
      EXPECT_GT(std::abs(s.dq_rate), 1e-4);
    }
  }
}

TEST(Equilibrium, IdentityFailsAwayFromGibbs) {
  std::mt19937_64 rng(1);
  const auto basis = openad::pauli_basis(1);
  const double beta = 1.0;
  const auto model = openad::thermalizing_model(ramp, 2, beta, 10.0);
  const Matrix l = openad::superoperator_matrix(model, 3.0, basis).matrix;
  const Matrix rho = oracle::random_density(2, rng);
  const Vector x = openad::vectorize(rho, basis).components();
  const double dq = openad::heat_rate_vector(openad::h_vector(ramp(3.0), basis), l, x, 2);
  const double ds = openad::entropy_rate_vector(openad::rho_log_vector(rho, basis), l, x, 2);
  EXPECT_GT(std::abs(ds - beta * dq), 1e-3);
}

TEST(Equilibrium, InfiniteTemperature) {
  const auto rep = openad::equilibrium_check(ramp, 2, 0.0, {0.0, 1.0, 2.0});
  for (const auto& s : rep.samples) {
    EXPECT_NEAR(s.dq_rate, 0.0, 1e-12);
    EXPECT_NEAR(s.ds_rate, 0.0, 1e-12);
  }
  EXPECT_THROW(openad::equilibrium_check(ramp, 2, -1.0, {0.0, 1.0}), openad::ParameterError);
}

TEST(Expansion, ReproducesAdiabaticPropagator) {
  openad::DeutschParams p;
  p.gamma0 = 0.2;
  p.tau = 10.0;
  const auto traj = openad::deutsch_trajectory(p, openad::numerics::linspace(0.0, 1.0, 201));
  const auto basis = openad::pauli_basis(1);
  const Vector x0 = openad::vectorize(openad::deutsch_initial_state(), basis).components();
  for (double t : {2.0, 6.0, 10.0}) {
    const auto ex = openad::adiabatic_expansion(traj, x0, t);
    const std::size_t j = openad::numerics::grid_index(traj.grid, t / p.tau);
    const Vector x = openad::propagator_1d(traj, 0.0, t).matrix * x0;
    const Matrix h = openad::deutsch_hamiltonian(p, t);
    EXPECT_NEAR(openad::heat_rate(traj, ex, h, t, basis), openad::heat_rate_vector(openad::h_vector(h, basis), traj.generators[j], x, 2),
                1e-12);
    const Matrix rho = openad::devectorize(x, basis);
    const Matrix drho = openad::generator_action(openad::deutsch_model(p), t, rho);
    EXPECT_NEAR(openad::entropy_rate(traj, ex, t, basis), -(log_herm(rho) * drho).trace().real(), 1e-9);
  }
  // the initial state is pure
  const auto ex0 = openad::adiabatic_expansion(traj, x0, 0.0);
  EXPECT_THROW(openad::entropy_rate(traj, ex0, 0.0, basis), openad::LogDomainError);
}

TEST(Expansion, NeedsGenerators) {
  openad::DeutschParams p;
  const auto traj = openad::trajectory_from_bases(openad::numerics::linspace(0.0, 1.0, 11), p.tau,
                                                  [&](double s) { return openad::deutsch_analytic_spectrum(p, s * p.tau); });
  const Vector x0 = oracle::components(oracle::bloch(0.5, 0, 0));
  const auto ex = openad::adiabatic_expansion(traj, x0, 1.0);
  EXPECT_THROW(openad::heat_rate(traj, ex, oracle::sz(), 1.0, openad::pauli_basis(1)), openad::DomainError);
}

TEST(Output, Header) {
  std::ostringstream os;
  openad::write_thermo(os, openad::equilibrium_check(ramp, 2, 1.0, {0.0, 1.0}));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,dQ_rate,dS_rate,residual");
}

}  // namespace
