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

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "openad/errors.hpp"
#include "openad/hilbert_schmidt.hpp"
#include "openad/lindblad.hpp"
#include "openad/numerics.hpp"
#include "openad/spectral.hpp"
#include "openad/types.hpp"

namespace openad {

namespace detail {

inline Matrix bloch_state(double x, double y, double z) {
  return 0.5 * (Matrix::Identity(2, 2) + x * pauli_x() + y * pauli_y() + z * pauli_z());
}

inline Vector vec4(Complex a, Complex b, Complex c, Complex d) {
  Vector v(4);
  v << a, b, c, d;
  return v;
}

inline RowVector row4(Complex a, Complex b, Complex c, Complex d) {
  RowVector v(4);
  v << a, b, c, d;
  return v;
}

inline JordanBasis one_dim_basis(const std::array<Complex, 4>& lambdas, const std::array<Vector, 4>& right,
                                 const std::array<RowVector, 4>& left, double t) {
  JordanBasis basis;
  basis.time = t;
  for (std::size_t a = 0; a < 4; ++a) {
    JordanBlockChain b;
    b.eigenvalue = lambdas[a];
    b.right_chain.push_back(right[a]);
    b.left_chain.push_back(left[a]);
    basis.blocks.push_back(std::move(b));
  }
  return basis;
}

}  // namespace detail

// Deutsch algorithm under dephasing.

struct DeutschParams {
  double omega = 1.0;
  double gamma0 = 0.1;
  int f0 = 0;
  int f1 = 1;
  double tau = 10.0;

  /// F = 1 - (-1)^{f(0)+f(1)}: 0 for constant f, 2 for balanced f.
  int big_f() const { return (f0 + f1) % 2 == 0 ? 0 : 2; }

  void validate() const {
    if (!(omega > 0.0)) throw ParameterError("deutsch: omega must be positive");
    if (!(gamma0 >= 0.0)) throw ParameterError("deutsch: gamma0 must be nonnegative");
    if ((f0 != 0 && f0 != 1) || (f1 != 0 && f1 != 1)) throw ParameterError("deutsch: f values must be 0 or 1");
    if (!(tau > 0.0)) throw ParameterError("deutsch: tau must be positive");
  }

  double g_c(double t) const { return std::cos(std::numbers::pi * big_f() * t / (2.0 * tau)); }
  double g_s(double t) const { return std::sin(std::numbers::pi * big_f() * t / (2.0 * tau)); }
};

/// Oracle with its global sign (-1)^{f(0)} divided out:
/// |0><0| + (-1)^{f(0)+f(1)} |1><1|.
inline Matrix deutsch_oracle(const DeutschParams& p) {
  Matrix o = Matrix::Zero(2, 2);
  o(0, 0) = 1.0;
  o(1, 1) = (p.f0 + p.f1) % 2 == 0 ? 1.0 : -1.0;
  return o;
}

inline Matrix deutsch_hamiltonian(const DeutschParams& p, double t) {
  const Matrix h0 = -0.5 * p.omega * pauli_x();
  const Matrix u = (Complex(0.0, 0.5 * std::numbers::pi * t / p.tau) * deutsch_oracle(p)).exp();
  return u * h0 * u.adjoint();
}

inline LindbladModel deutsch_model(const DeutschParams& p) {
  p.validate();
  LindbladModel m;
  m.dim_s = 2;
  m.horizon = p.tau;
  m.hamiltonian = [p](double t) { return deutsch_hamiltonian(p, t); };
  const double amp = std::sqrt(p.gamma0);
  m.jump_ops.push_back([amp](double) -> Matrix { return amp * pauli_z(); });
  return m;
}

/// Closed-form eigenvalues and bi-orthonormal eigenvectors at time t, blocks
/// in the order (0, 1, 2, 3): lambda = 0, -2 gamma, -Delta_+, -Delta_-, with
/// Delta_pm = gamma +- sqrt(gamma^2 - omega^2).
inline JordanBasis deutsch_analytic_spectrum(const DeutschParams& p, double t) {
  p.validate();
  const double g = p.gamma0, w = p.omega;
  const Complex r = std::sqrt(Complex(g * g - w * w, 0.0));
  if (std::norm(r) < 1e-12 * w * w) {  // r is a square root; test its square
    throw DegenerateSpectrumError(detail::concat("deutsch spectrum degenerate at gamma = omega = ", w));
  }
  const Complex dp = g + r, dm = g - r;
  const double gc = p.g_c(t), gs = p.g_s(t);
  using detail::row4, detail::vec4;
  return detail::one_dim_basis(
      {Complex(0.0), Complex(-2.0 * g), -dp, -dm},
      {vec4(1, 0, 0, 0), vec4(0, -gc, gs, 0), vec4(0, dp / w * gs, dp / w * gc, 1), vec4(0, w / dp * gs, w / dp * gc, 1)},
      {row4(1, 0, 0, 0), row4(0, -gc, gs, 0), 0.5 * row4(0, w * gs / r, w * gc / r, -dm / r),
       0.5 * row4(0, -w * gs / r, -w * gc / r, dp / r)},
      t);
}

inline Matrix deutsch_adiabatic_state(const DeutschParams& p, double t) {
  const double decay = std::exp(-2.0 * p.gamma0 * t);
  return detail::bloch_state(decay * p.g_c(t), -decay * p.g_s(t), 0.0);
}

inline Matrix deutsch_target(const DeutschParams& p) { return deutsch_adiabatic_state(p, p.tau); }

/// Instantaneous ground state of the closed-system Hamiltonian.
inline Matrix deutsch_closed_system_state(const DeutschParams& p, double t) {
  return detail::bloch_state(p.g_c(t), -p.g_s(t), 0.0);
}

/// |+><+|.
inline Matrix deutsch_initial_state() { return detail::bloch_state(1.0, 0.0, 0.0); }

// Landau-Zener under bit-phase flip.

struct LandauZenerParams {
  double omega0 = 1.0;
  double theta_final = 2.0 * std::numbers::pi / 5.0;
  double gamma0 = 0.1;
  double tau = 10.0;
  /// s -> Delta(s); empty means the linear ramp tan(theta_final) omega0 s.
  std::function<double(double)> delta_profile;

  void validate() const {
    if (!(omega0 > 0.0)) throw ParameterError("landau_zener: omega0 must be positive");
    if (!(gamma0 >= 0.0)) throw ParameterError("landau_zener: gamma0 must be nonnegative");
    if (!(tau > 0.0)) throw ParameterError("landau_zener: tau must be positive");
    if (!(theta_final >= 0.0 && theta_final < std::numbers::pi / 2.0)) {
      throw ParameterError(detail::concat("landau_zener: theta_final = ", theta_final, " must lie in [0, pi/2)"));
    }
    if (delta_profile && std::abs(delta_profile(0.0)) > 1e-14) throw ParameterError("landau_zener: Delta(0) must vanish");
  }

  double delta(double t) const {
    const double s = t / tau;
    return delta_profile ? delta_profile(s) : std::tan(theta_final) * omega0 * s;
  }
  double theta(double t) const { return std::atan(delta(t) / omega0); }
};

/// H = (omega0 sigma_z + Delta sigma_x) / 2, bit-phase-flip jump sqrt(gamma) sigma_y.
inline LindbladModel lz_model(const LandauZenerParams& p) {
  p.validate();
  LindbladModel m;
  m.dim_s = 2;
  m.horizon = p.tau;
  m.hamiltonian = [p](double t) -> Matrix { return 0.5 * (p.omega0 * pauli_z() + p.delta(t) * pauli_x()); };
  const double amp = std::sqrt(p.gamma0);
  m.jump_ops.push_back([amp](double) -> Matrix { return amp * pauli_y(); });
  return m;
}

/// kappa^2 = gamma^2 cos^2(theta) - omega0^2, principal branch.
inline Complex lz_kappa(const LandauZenerParams& p, double t) {
  const double c = std::cos(p.theta(t));
  return std::sqrt(Complex(p.gamma0 * p.gamma0 * c * c - p.omega0 * p.omega0, 0.0));
}

/// Blocks (0, 1, 2, 3) with lambda = 0, -2 gamma, -gamma - kappa/cos(theta),
/// -gamma + kappa/cos(theta).
inline JordanBasis lz_analytic_spectrum(const LandauZenerParams& p, double t) {
  p.validate();
  const double th = p.theta(t), c = std::cos(th), sn = std::sin(th), g = p.gamma0, w0 = p.omega0;
  const Complex k = lz_kappa(p, t);
  if (std::norm(k) < 1e-12 * w0 * w0) {
    throw DegenerateSpectrumError(detail::concat("landau_zener spectrum degenerate (kappa = 0) at t = ", t));
  }
  const Complex kp = 1.0 + c * g / k, km = 1.0 - c * g / k;
  using detail::row4, detail::vec4;
  return detail::one_dim_basis(
      {Complex(0.0), Complex(-2.0 * g), -g - k / c, -g + k / c},
      {vec4(1, 0, 0, 0), vec4(0, sn, 0, c), vec4(0, -c, (g * c - k) / w0, sn), vec4(0, -c, (g * c + k) / w0, sn)},
      {row4(1, 0, 0, 0), row4(0, sn, 0, c), 0.5 * row4(0, -c * kp, -w0 / k, sn * kp), 0.5 * row4(0, -c * km, w0 / k, sn * km)},
      t);
}

inline Matrix lz_adiabatic_state(const LandauZenerParams& p, double t) {
  const double decay = std::exp(-2.0 * p.gamma0 * t), th = p.theta(t);
  return detail::bloch_state(-decay * std::sin(th), 0.0, -decay * std::cos(th));
}

inline Matrix lz_target(const LandauZenerParams& p) { return lz_adiabatic_state(p, p.tau); }

/// |1><1|, ground state of H(0).
inline Matrix lz_initial_state() { return detail::bloch_state(0.0, 0.0, -1.0); }



/// exp(-beta H)/Z, shifted by the smallest eigenvalue for stability.
inline Matrix gibbs_state(const Matrix& h, double beta) {
  if (!(beta >= 0.0)) throw ParameterError("gibbs_state: beta must be nonnegative");
  if (!numerics::is_hermitian(h, 1e-10)) throw ParameterError("gibbs_state: H must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  const double e_min = es.eigenvalues().minCoeff();
  const Matrix w = numerics::hermitian_function(h, [&](double e) { return std::exp(-beta * (e - e_min)); });
  return w / w.trace().real();
}

/// Trajectories in the closed-form gauge of the built-in models.
inline SpectralTrajectory deutsch_trajectory(const DeutschParams& p, std::vector<double> grid) {
  const auto model = deutsch_model(p);
  const auto basis = pauli_basis(1);
  return trajectory_from_bases(
      std::move(grid), p.tau, [&](double s) { return deutsch_analytic_spectrum(p, s * p.tau); },
      [&](double s) { return superoperator_matrix(model, s * p.tau, basis).matrix; });
}

inline SpectralTrajectory lz_trajectory(const LandauZenerParams& p, std::vector<double> grid) {
  const auto model = lz_model(p);
  const auto basis = pauli_basis(1);
  return trajectory_from_bases(
      std::move(grid), p.tau, [&](double s) { return lz_analytic_spectrum(p, s * p.tau); },
      [&](double s) { return superoperator_matrix(model, s * p.tau, basis).matrix; });
}

}  // namespace openad
