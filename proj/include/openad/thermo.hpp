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
#include <ostream>
#include <vector>

#include <Eigen/QR>

#include "openad/csv.hpp"
#include "openad/errors.hpp"
#include "openad/evolution.hpp"
#include "openad/hilbert_schmidt.hpp"
#include "openad/lindblad.hpp"
#include "openad/models.hpp"
#include "openad/numerics.hpp"
#include "openad/spectral.hpp"
#include "openad/types.hpp"

namespace openad {

/// Left vector with components tr(H sigma_j).
inline RowVector h_vector(const Matrix& h, const OperatorBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim_s());
  if (h.rows() != d || h.cols() != d) throw DimensionError("h_vector: dimension mismatch");
  RowVector out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) out(static_cast<Eigen::Index>(j)) = (h * basis[j]).trace();
  return out;
}

/// Left vector with components tr(log(rho) sigma_j), natural log.
inline RowVector rho_log_vector(const Matrix& rho, const OperatorBasis& basis, double floor = 1e-14) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  const double e_min = es.eigenvalues().minCoeff();
  if (e_min < floor) throw LogDomainError(detail::concat("rho_log_vector: eigenvalue ", e_min, " below floor ", floor));
  return h_vector(numerics::hermitian_function(rho, [](double x) { return std::log(x); }), basis);
}

/// |rho_ad(t)> = sum_i c_i e^{phi_i} |D_i(t)>, i over the flattened chain index.
struct StateExpansion {
  std::vector<Complex> coefficients;
  std::vector<Complex> phases;
};

/// Coefficients from the initial state and phases int_0^t (lambda_i - <E_i|D_i dot>) on the grid.
inline StateExpansion adiabatic_expansion(const SpectralTrajectory& traj, const Vector& x0, double t) {
  const std::size_t j1 = numerics::grid_index(traj.grid, t / traj.tau);
  const Vector c = traj.bases.front().left_matrix() * x0;
  StateExpansion ex;
  for (std::size_t b = 0; b < traj.block_count(); ++b) {
    for (std::size_t n = 0; n < traj.block_dim(b); ++n) {
      const auto i = static_cast<Eigen::Index>(traj.offset(b) + n);
      ex.coefficients.push_back(c(i));
      Complex ph = 0.0;
      for (std::size_t j = 0; j < j1; ++j) {
        auto f = [&](std::size_t q) { return traj.tau * traj.bases[q].blocks[b].eigenvalue - traj.couplings[q](i, i); };
        ph += 0.5 * (traj.grid[j + 1] - traj.grid[j]) * (f(j) + f(j + 1));
      }
      ex.phases.push_back(ph);
    }
  }
  return ex;
}

namespace detail {

inline Vector expanded_state(const SpectralTrajectory& traj, const StateExpansion& ex, std::size_t j) {
  const Matrix r = traj.bases[j].right_matrix();
  if (static_cast<Eigen::Index>(ex.coefficients.size()) != r.cols() || ex.phases.size() != ex.coefficients.size()) {
    throw DimensionError("state expansion does not match the basis");
  }
  Vector x = Vector::Zero(r.rows());
  for (Eigen::Index i = 0; i < r.cols(); ++i) {
    x += ex.coefficients[static_cast<std::size_t>(i)] * std::exp(ex.phases[static_cast<std::size_t>(i)]) * r.col(i);
  }
  return x;
}

inline const Matrix& generator_at(const SpectralTrajectory& traj, std::size_t j) {
  if (traj.generators.empty()) throw DomainError("trajectory carries no generators");
  return traj.generators[j];
}

}  // namespace detail

/// (1/D_S) <h| L |x>, the heat rate of a state vector x.
inline double heat_rate_vector(const RowVector& h, const Matrix& l, const Vector& x, std::size_t dim_s) {
  return ((h * l * x).value() / static_cast<double>(dim_s)).real();
}

/// -(1/D_S) <rho_log| L |x>.
inline double entropy_rate_vector(const RowVector& rho_log, const Matrix& l, const Vector& x, std::size_t dim_s) {
  return -((rho_log * l * x).value() / static_cast<double>(dim_s)).real();
}

inline double heat_rate(const SpectralTrajectory& traj, const StateExpansion& ex, const Matrix& h, double t,
                        const OperatorBasis& basis) {
  const std::size_t j = numerics::grid_index(traj.grid, t / traj.tau);
  return heat_rate_vector(h_vector(h, basis), detail::generator_at(traj, j), detail::expanded_state(traj, ex, j), basis.dim_s());
}

/// Entropy rate with rho_log taken from the expanded adiabatic state itself.
inline double entropy_rate(const SpectralTrajectory& traj, const StateExpansion& ex, double t, const OperatorBasis& basis) {
  const std::size_t j = numerics::grid_index(traj.grid, t / traj.tau);
  const Vector x = detail::expanded_state(traj, ex, j);
  const Matrix rho = devectorize(x, basis);
  return entropy_rate_vector(rho_log_vector(rho, basis), detail::generator_at(traj, j), x, basis.dim_s());
}

using HamiltonianPath = std::function<Matrix(double t)>;

/// -i[H, .] plus detailed-balance jumps sqrt(k e^{-beta (E_n - E_m)/2}) |E_n><E_m| between every
/// pair of instantaneous eigenstates; exp(-beta H)/Z is stationary.
inline LindbladModel thermalizing_model(HamiltonianPath h_path, std::size_t dim_s, double beta, double horizon, double coupling = 1.0) {
  LindbladModel m;
  m.dim_s = dim_s;
  m.horizon = horizon;
  m.hamiltonian = h_path;
  for (std::size_t from = 0; from < dim_s; ++from) {
    for (std::size_t to = 0; to < dim_s; ++to) {
      if (from == to) continue;
      m.jump_ops.push_back([h_path, beta, coupling, from, to](double t) -> Matrix {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h_path(t));
        const auto& e = es.eigenvalues();
        const auto i = static_cast<Eigen::Index>(from), k = static_cast<Eigen::Index>(to);
        const double rate = coupling * std::exp(-0.5 * beta * (e(k) - e(i)));
        return std::sqrt(rate) * es.eigenvectors().col(k) * es.eigenvectors().col(i).adjoint();
      });
    }
  }
  return m;
}

struct ThermoSample {
  double t = 0.0;
  double dq_rate = 0.0;
  double ds_rate = 0.0;
  double beta = 0.0;
  double residual = 0.0;
};

struct EquilibriumReport {
  std::vector<ThermoSample> samples;
  double max_residual = 0.0;
  /// max |dS - beta dQ| / max |dQ| (zero when both vanish).
  double relative_residual = 0.0;
};

/// Along rho_eq(t) = exp(-beta H(t))/Z: the adiabatic state of the thermalizing
/// generator lags the Gibbs state by delta with L delta = d rho_eq/dt, so
/// L|rho_eq + delta> = d|rho_eq>/dt. Both rates are evaluated on that state,
/// with rho_log from the Gibbs state.
inline EquilibriumReport equilibrium_check(const HamiltonianPath& h_path, std::size_t dim_s, double beta, const std::vector<double>& times,
                                           double coupling = 1.0) {
  numerics::require_grid(times, 1);
  if (!(beta >= 0.0)) throw ParameterError("equilibrium_check: beta must be nonnegative");
  const auto basis = pauli_basis_for_dim(dim_s);
  const double horizon = times.back();
  const double t_lo = times.front();
  const auto model = thermalizing_model(h_path, dim_s, beta, std::max(horizon, 1e-300), coupling);
  const double span = std::max(horizon - t_lo, 1.0);
  const double step = 1e-5 * span;

  EquilibriumReport report;
  double max_dq = 0.0;
  for (double t : times) {
    const Matrix h = h_path(t);
    const Matrix rho_eq = gibbs_state(h, beta);
    auto g = [&](double u) { return gibbs_state(h_path(u), beta); };
    Matrix d_rho = Matrix::Zero(h.rows(), h.cols());
    // second order everywhere: one-sided stencils at the ends of the window
    if (horizon - t_lo < 2.0 * step) {
    } else if (t - step < t_lo) {
      d_rho = (-3.0 * rho_eq + 4.0 * g(t + step) - g(t + 2.0 * step)) / (2.0 * step);
    } else if (t + step > horizon) {
      d_rho = (3.0 * rho_eq - 4.0 * g(t - step) + g(t - 2.0 * step)) / (2.0 * step);
    } else {
      d_rho = (g(t + step) - g(t - step)) / (2.0 * step);
    }
    const Matrix l = superoperator_matrix(model, t, basis).matrix;
    const Vector rhs = vectorize(d_rho, basis).components();
    const Vector delta = l.completeOrthogonalDecomposition().solve(rhs);
    const Vector x = vectorize(rho_eq, basis).components() + delta;

    ThermoSample smp;
    smp.t = t;
    smp.beta = beta;
    smp.dq_rate = heat_rate_vector(h_vector(h, basis), l, x, dim_s);
    smp.ds_rate = entropy_rate_vector(rho_log_vector(rho_eq, basis), l, x, dim_s);
    smp.residual = std::abs(smp.ds_rate - beta * smp.dq_rate);
    report.max_residual = std::max(report.max_residual, smp.residual);
    max_dq = std::max(max_dq, std::abs(smp.dq_rate));
    report.samples.push_back(smp);
  }
  report.relative_residual = max_dq > 0.0 ? report.max_residual / max_dq : report.max_residual;
  return report;
}

/// max_{j>=1} |tr(log rho_eq sigma_j) + beta tr(H sigma_j)|.
inline double gibbs_identity_error(const Matrix& h, double beta, const OperatorBasis& basis) {
  const RowVector lhs = rho_log_vector(gibbs_state(h, beta), basis);
  const RowVector hv = h_vector(h, basis);
  double worst = 0.0;
  for (Eigen::Index j = 1; j < lhs.size(); ++j) worst = std::max(worst, std::abs(lhs(j) + beta * hv(j)));
  return worst;
}

/// CSV with header t, dQ_rate, dS_rate, residual.
inline void write_thermo(std::ostream& os, const EquilibriumReport& report) {
  csv::write_row(os, {"t", "dQ_rate", "dS_rate", "residual"});
  for (const auto& s : report.samples) {
    csv::write_row(os, {csv::number(s.t), csv::number(s.dq_rate), csv::number(s.ds_rate), csv::number(s.residual)});
  }
}

}  // namespace openad
