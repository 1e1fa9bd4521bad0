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

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "openad/csv.hpp"
#include "openad/errors.hpp"
#include "openad/hilbert_schmidt.hpp"
#include "openad/lindblad.hpp"
#include "openad/numerics.hpp"
#include "openad/parallel.hpp"
#include "openad/spectral.hpp"
#include "openad/types.hpp"

namespace openad {

enum class PropagatorKind { one_dimensional, multiblock };

struct AdiabaticPropagator {
  PropagatorKind kind = PropagatorKind::one_dimensional;
  double t0 = 0.0;
  double t = 0.0;
  Matrix matrix;
  /// int_{t0}^t Lambda_alpha (one-dimensional) or int lambda_alpha (multiblock), per block.
  std::vector<Complex> phases;
};

namespace detail {

struct Span {
  std::size_t i0, i1;
  bool reversed;
};

inline Span time_span(const SpectralTrajectory& traj, double t0, double t) {
  const std::size_t i0 = numerics::grid_index(traj.grid, t0 / traj.tau);
  const std::size_t i1 = numerics::grid_index(traj.grid, t / traj.tau);
  return {std::min(i0, i1), std::max(i0, i1), i1 < i0};
}

// Trapezoid of values over grid indices [i0, i1].
inline Complex grid_integral(const SpectralTrajectory& traj, std::size_t i0, std::size_t i1,
                             const std::function<Complex(std::size_t)>& f) {
  Complex acc = 0.0;
  for (std::size_t j = i0; j < i1; ++j) acc += 0.5 * (traj.grid[j + 1] - traj.grid[j]) * (f(j) + f(j + 1));
  return acc;
}

inline void require_one_dimensional(const SpectralTrajectory& traj) {
  for (std::size_t a = 0; a < traj.block_count(); ++a) {
    if (traj.block_dim(a) != 1) throw WrongKindError(concat("block ", a, " has dimension ", traj.block_dim(a), "; use propagator_multiblock"));
  }
}

}  // namespace detail

/// int_{t0}^t Lambda_alpha dt' = tau int lambda ds - int <E_alpha|d_s D_alpha> ds (trapezoid on the grid).
inline Complex adiabatic_phase(const SpectralTrajectory& traj, std::size_t alpha, double t0, double t) {
  if (alpha >= traj.block_count()) throw std::out_of_range("adiabatic_phase: block out of range");
  if (traj.block_dim(alpha) != 1) throw WrongKindError("adiabatic_phase needs a one-dimensional block");
  const auto sp = detail::time_span(traj, t0, t);
  const Complex phase = detail::grid_integral(traj, sp.i0, sp.i1, [&](std::size_t j) {
    return traj.tau * traj.bases[j].blocks[alpha].eigenvalue - traj.coupling(j, alpha, 0, alpha, 0);
  });
  return sp.reversed ? -phase : phase;
}

/// V = sum_alpha e^{int Lambda_alpha} |D_alpha(t)><E_alpha(t0)|.
inline AdiabaticPropagator propagator_1d(const SpectralTrajectory& traj, double t0, double t) {
  detail::require_one_dimensional(traj);
  const std::size_t j0 = numerics::grid_index(traj.grid, t0 / traj.tau), j1 = numerics::grid_index(traj.grid, t / traj.tau);
  AdiabaticPropagator v{PropagatorKind::one_dimensional, t0, t, Matrix::Zero(static_cast<Eigen::Index>(traj.bases[0].total_dim()),
                                                                           static_cast<Eigen::Index>(traj.bases[0].total_dim())), {}};
  for (std::size_t a = 0; a < traj.block_count(); ++a) {
    const Complex ph = adiabatic_phase(traj, a, t0, t);
    v.phases.push_back(ph);
    v.matrix.noalias() += std::exp(ph) * traj.bases[j1].blocks[a].right_chain[0] * traj.bases[j0].blocks[a].left_chain[0];
  }
  return v;
}

/// V^{-1} = sum_alpha e^{-int Lambda_alpha} |D_alpha(t0)><E_alpha(t)|.
inline AdiabaticPropagator propagator_1d_inverse(const SpectralTrajectory& traj, double t0, double t) {
  detail::require_one_dimensional(traj);
  const std::size_t j0 = numerics::grid_index(traj.grid, t0 / traj.tau), j1 = numerics::grid_index(traj.grid, t / traj.tau);
  const auto n = static_cast<Eigen::Index>(traj.bases[0].total_dim());
  AdiabaticPropagator v{PropagatorKind::one_dimensional, t0, t, Matrix::Zero(n, n), {}};
  for (std::size_t a = 0; a < traj.block_count(); ++a) {
    const Complex ph = adiabatic_phase(traj, a, t0, t);
    v.phases.push_back(ph);
    v.matrix.noalias() += std::exp(-ph) * traj.bases[j0].blocks[a].right_chain[0] * traj.bases[j1].blocks[a].left_chain[0];
  }
  return v;
}

/// Intra-block coefficients: v is the fundamental matrix of
/// dp/ds = [tau U - C(s)] p with v(s0) = 1 (U the upper shift, C_kn = <E^k|d_s D^n>),
/// v_tilde its inverse.
struct BlockCoefficients {
  Matrix v;
  Matrix v_tilde;
  /// max |v v_tilde - 1|, |v_tilde v - 1|.
  double inverse_residual = 0.0;
  /// max |v_tilde U v - U|; zero when the block-diagonalization constraint holds.
  double shift_residual = 0.0;
};

inline Matrix upper_shift(Eigen::Index n) {
  Matrix u = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) u(i, i + 1) = 1.0;
  return u;
}

struct CoefficientOptions {
  /// Throw CoefficientError when the shift constraint misses by more than tol.
  bool require_shift = false;
  double tol = 1e-8;
};

inline BlockCoefficients block_coefficients(const SpectralTrajectory& traj, std::size_t beta, double t0, double t,
                                            const CoefficientOptions& opts = {}) {
  if (beta >= traj.block_count()) throw std::out_of_range("block_coefficients: block out of range");
  const auto nb = static_cast<Eigen::Index>(traj.block_dim(beta));
  const auto off = static_cast<Eigen::Index>(traj.offset(beta));
  const auto sp = detail::time_span(traj, t0, t);
  const Matrix u = upper_shift(nb);
  auto generator = [&](std::size_t j) -> Matrix { return traj.tau * u - traj.couplings[j].block(off, off, nb, nb); };

  // Piecewise exponential of the interval-averaged generator.
  Matrix v = Matrix::Identity(nb, nb);
  if (!sp.reversed) {
    for (std::size_t j = sp.i0; j < sp.i1; ++j) {
      const double h = traj.grid[j + 1] - traj.grid[j];
      v = (0.5 * h * (generator(j) + generator(j + 1))).exp() * v;
    }
  } else {
    for (std::size_t j = sp.i1; j > sp.i0; --j) {
      const double h = traj.grid[j] - traj.grid[j - 1];
      v = (-0.5 * h * (generator(j) + generator(j - 1))).exp() * v;
    }
  }

  BlockCoefficients c;
  c.v = v;
  Eigen::FullPivLU<Matrix> lu(v);
  if (!lu.isInvertible()) throw CoefficientError("block_coefficients: v is singular", std::numeric_limits<double>::infinity());
  c.v_tilde = lu.inverse();
  const Matrix id = Matrix::Identity(nb, nb);
  c.inverse_residual = std::max((c.v * c.v_tilde - id).cwiseAbs().maxCoeff(), (c.v_tilde * c.v - id).cwiseAbs().maxCoeff());
  c.shift_residual = nb > 1 ? (c.v_tilde * u * c.v - u).cwiseAbs().maxCoeff() : 0.0;
  if (c.inverse_residual > opts.tol) {
    throw CoefficientError(detail::concat("v and v_tilde are not mutual inverses (residual ", c.inverse_residual, ")"), c.inverse_residual);
  }
  if (opts.require_shift && c.shift_residual > opts.tol) {
    throw CoefficientError(detail::concat("shift constraint violated (residual ", c.shift_residual, ")"), c.shift_residual);
  }
  return c;
}

namespace detail {

inline Complex eigenvalue_integral(const SpectralTrajectory& traj, std::size_t beta, double t0, double t) {
  const auto sp = time_span(traj, t0, t);
  const Complex ph = grid_integral(traj, sp.i0, sp.i1, [&](std::size_t j) { return traj.tau * traj.bases[j].blocks[beta].eigenvalue; });
  return sp.reversed ? -ph : ph;
}

inline Matrix chain_matrix(const std::vector<Vector>& chain) {
  Matrix m(chain.front().size(), static_cast<Eigen::Index>(chain.size()));
  for (std::size_t n = 0; n < chain.size(); ++n) m.col(static_cast<Eigen::Index>(n)) = chain[n];
  return m;
}

inline Matrix chain_matrix(const std::vector<RowVector>& chain) {
  Matrix m(static_cast<Eigen::Index>(chain.size()), chain.front().size());
  for (std::size_t n = 0; n < chain.size(); ++n) m.row(static_cast<Eigen::Index>(n)) = chain[n];
  return m;
}

}  // namespace detail

/// V = sum_beta e^{int lambda_beta} sum_nm v_nm |D_beta^n(t)><E_beta^m(t0)|.
inline AdiabaticPropagator propagator_multiblock(const SpectralTrajectory& traj, double t0, double t,
                                                 const CoefficientOptions& opts = {}) {
  const std::size_t j0 = numerics::grid_index(traj.grid, t0 / traj.tau), j1 = numerics::grid_index(traj.grid, t / traj.tau);
  const auto n = static_cast<Eigen::Index>(traj.bases[0].total_dim());
  AdiabaticPropagator v{PropagatorKind::multiblock, t0, t, Matrix::Zero(n, n), {}};
  for (std::size_t b = 0; b < traj.block_count(); ++b) {
    const auto c = block_coefficients(traj, b, t0, t, opts);
    const Complex ph = detail::eigenvalue_integral(traj, b, t0, t);
    v.phases.push_back(ph);
    v.matrix.noalias() += std::exp(ph) * detail::chain_matrix(traj.bases[j1].blocks[b].right_chain) * c.v *
                          detail::chain_matrix(traj.bases[j0].blocks[b].left_chain);
  }
  return v;
}

/// V^{-1} = sum_beta e^{-int lambda_beta} sum_nm v_tilde_nm |D_beta^n(t0)><E_beta^m(t)|.
inline AdiabaticPropagator propagator_multiblock_inverse(const SpectralTrajectory& traj, double t0, double t,
                                                         const CoefficientOptions& opts = {}) {
  const std::size_t j0 = numerics::grid_index(traj.grid, t0 / traj.tau), j1 = numerics::grid_index(traj.grid, t / traj.tau);
  const auto n = static_cast<Eigen::Index>(traj.bases[0].total_dim());
  AdiabaticPropagator v{PropagatorKind::multiblock, t0, t, Matrix::Zero(n, n), {}};
  for (std::size_t b = 0; b < traj.block_count(); ++b) {
    const auto c = block_coefficients(traj, b, t0, t, opts);
    const Complex ph = detail::eigenvalue_integral(traj, b, t0, t);
    v.phases.push_back(ph);
    v.matrix.noalias() += std::exp(-ph) * detail::chain_matrix(traj.bases[j0].blocks[b].right_chain) * c.v_tilde *
                          detail::chain_matrix(traj.bases[j1].blocks[b].left_chain);
  }
  return v;
}

// Master equation integration.

using GeneratorPath = std::function<Matrix(double t)>;

/// Classic RK4 with `steps` equal steps from t0 to t1.
inline Vector rk4_endpoint(const GeneratorPath& l, Vector x, double t0, double t1, std::size_t steps) {
  if (steps == 0) throw ParameterError("rk4_endpoint: steps must be positive");
  const double h = (t1 - t0) / static_cast<double>(steps);
  Matrix l_start = l(t0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + h * static_cast<double>(i);
    const Matrix l_mid = l(t + 0.5 * h);
    const Matrix l_end = l(i + 1 == steps ? t1 : t + h);
    const Vector k1 = l_start * x;
    const Vector k2 = l_mid * (x + 0.5 * h * k1);
    const Vector k3 = l_mid * (x + 0.5 * h * k2);
    const Vector k4 = l_end * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    l_start = l_end;
  }
  return x;
}

struct SolveOptions {
  /// Accept when halving the step moves the endpoint by less than this (max norm).
  double tol = 1e-9;
  /// Initial steps per unit of physical time.
  double steps_per_time = 4.0;
  std::size_t min_steps = 16;
  std::size_t max_steps = std::size_t{1} << 22;
};

struct MasterSolution {
  std::vector<double> times;
  std::vector<CoherenceVector> states;
  std::size_t steps = 0;
  /// Endpoint change at the last halving.
  double endpoint_change = 0.0;
};

inline MasterSolution integrate_generator(const GeneratorPath& l, const Vector& x0, std::size_t basis_dim, const std::vector<double>& times,
                                          const SolveOptions& opts = {}) {
  numerics::require_grid(times, 2);
  const double span = times.back() - times.front();
  auto run = [&](std::size_t steps) {
    std::vector<Vector> out{x0};
    Vector x = x0;
    for (std::size_t j = 1; j < times.size(); ++j) {
      const double frac = (times[j] - times[j - 1]) / span;
      const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(frac * static_cast<double>(steps))));
      x = rk4_endpoint(l, x, times[j - 1], times[j], n);
      if (!x.allFinite()) throw IntegrationError("master equation integration produced non-finite values; reduce the maximum step");
      out.push_back(x);
    }
    return out;
  };
  std::size_t steps = std::max(opts.min_steps, static_cast<std::size_t>(std::ceil(opts.steps_per_time * span)));
  auto coarse = run(steps);
  for (;;) {
    if (2 * steps > opts.max_steps) {
      throw IntegrationError(detail::concat("step control failed to reach tolerance ", opts.tol, " with ", steps,
                                            " steps; the problem may be stiff, try a smaller maximum step"));
    }
    auto fine = run(2 * steps);
    const double change = (fine.back() - coarse.back()).cwiseAbs().maxCoeff();
    steps *= 2;
    coarse = std::move(fine);
    if (change < opts.tol) {
      MasterSolution sol;
      sol.times = times;
      sol.steps = steps;
      sol.endpoint_change = change;
      for (auto& x : coarse) sol.states.emplace_back(std::move(x), basis_dim);
      return sol;
    }
  }
}

namespace detail {

inline void require_density_matrix(const Matrix& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if (!numerics::is_hermitian(rho, tol)) throw InvalidStateError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) throw InvalidStateError(concat("density matrix trace is ", rho.trace().real()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw InvalidStateError(concat("density matrix has eigenvalue ", es.eigenvalues().minCoeff()));
}

}  // namespace detail

/// Integrates d|rho>/dt = L(t)|rho> through the given physical times.
inline MasterSolution solve_master(const LindbladModel& model, const Matrix& rho0, const std::vector<double>& times,
                                   const OperatorBasis& basis, const SolveOptions& opts = {}) {
  detail::require_density_matrix(rho0);
  const Vector x0 = vectorize(rho0, basis).components();
  return integrate_generator([&](double t) { return superoperator_matrix(model, t, basis).matrix; }, x0, basis.dim_s(), times, opts);
}

inline MasterSolution solve_master(const LindbladModel& model, const Matrix& rho0, const std::vector<double>& times,
                                   const SolveOptions& opts = {}) {
  return solve_master(model, rho0, times, pauli_basis_for_dim(model.dim_s), opts);
}

/// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)); eigenvalues above -1e-10 are clipped.
inline double fidelity(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimensionError("fidelity: shape mismatch");
  for (const Matrix* m : {&rho, &sigma}) {
    if (!numerics::is_hermitian(*m, 1e-8)) throw InvalidStateError("fidelity: input is not Hermitian");
  }
  const Matrix sr = numerics::psd_sqrt(rho);
  const Matrix inner = sr * (0.5 * (sigma + sigma.adjoint())) * sr;
  const Matrix root = numerics::psd_sqrt(inner);
  return std::clamp(root.trace().real(), 0.0, 1.0);
}

struct CurvePoint {
  double tau = 0.0;
  double infidelity = 0.0;
  Matrix final_state;
};

using ModelForTau = std::function<LindbladModel(double tau)>;
using TargetRule = std::function<Matrix(double tau)>;

/// Full solve to t = tau for every tau, then 1 - F against the target. Points
/// are independent and run on `jobs` threads; rows come back in tau order.
inline std::vector<CurvePoint> infidelity_curve(const ModelForTau& model_for_tau, const Matrix& rho0, const TargetRule& target_rule,
                                                const std::vector<double>& tau_grid, unsigned jobs = 1, const SolveOptions& opts = {}) {
  std::vector<CurvePoint> out(tau_grid.size());
  parallel_for(tau_grid.size(), jobs, [&](std::size_t i) {
    const double tau = tau_grid[i];
    const auto model = model_for_tau(tau);
    const auto basis = pauli_basis_for_dim(model.dim_s);
    const auto sol = solve_master(model, rho0, {0.0, tau}, basis, opts);
    const Matrix rho = devectorize(sol.states.back(), basis);
    out[i] = CurvePoint{tau, 1.0 - fidelity(rho, target_rule(tau)), rho};
  });
  return out;
}

/// CSV with header omega_tau, infidelity, gamma0, model.
inline void write_curve(std::ostream& os, const std::vector<CurvePoint>& curve, double omega, double gamma0, const std::string& model) {
  csv::write_row(os, {"omega_tau", "infidelity", "gamma0", "model"});
  for (const auto& p : curve) csv::write_row(os, {csv::number(omega * p.tau), csv::number(p.infidelity), csv::number(gamma0), model});
}

}  // namespace openad
