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
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "openad/csv.hpp"
#include "openad/errors.hpp"
#include "openad/numerics.hpp"
#include "openad/spectral.hpp"
#include "openad/types.hpp"

namespace openad {

/// Optional amplitude p_alpha^n(s) multiplying each coupling term of F-tilde.
using ChainWeight = std::function<Complex(std::size_t n, double s)>;

namespace detail {

inline void require_block(const SpectralTrajectory& traj, std::size_t block) {
  if (block >= traj.block_count()) {
    throw std::out_of_range(concat("block ", block, " out of range (", traj.block_count(), " blocks)"));
  }
}

inline std::span<const double> tail(const std::vector<double>& v, std::size_t from) {
  return std::span<const double>(v).subspan(from);
}

// F-tilde^k_{alpha beta} on grid points i0..end, integration started at s_{i0}.
inline std::vector<Complex> f_tilde_path(const SpectralTrajectory& traj, std::size_t k, std::size_t alpha, std::size_t beta,
                                         std::size_t i0, const ChainWeight& weight) {
  require_block(traj, alpha);
  require_block(traj, beta);
  if (k >= traj.block_dim(beta)) throw std::out_of_range(concat("chain index ", k, " out of range for block ", beta));
  const std::size_t n = traj.size() - i0;
  std::vector<Complex> self(n);
  for (std::size_t j = 0; j < n; ++j) self[j] = traj.coupling(i0 + j, beta, k, beta, k);
  const auto phase = numerics::cumulative_trapezoid<Complex>(tail(traj.grid, i0), self);
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc = 0.0;
    for (std::size_t m = 0; m < traj.block_dim(alpha); ++m) {
      const Complex w = weight ? weight(m, traj.grid[i0 + j]) : Complex(1.0);
      acc += w * traj.coupling(i0 + j, beta, k, alpha, m);
    }
    out[j] = std::exp(-phase[j]) * acc;
  }
  return out;
}

inline double exp_abs(Complex prefactor, double log_scale) {
  const double a = std::abs(prefactor);
  if (a == 0.0) return 0.0;
  return std::exp(std::log(a) + log_scale);
}

}  // namespace detail

/// F-tilde^k_{alpha beta}(s) = sum_n exp(-int_{s0}^s <E_beta^k|d D_beta^k>) <E_beta^k(s)|d_s D_alpha^n(s)>,
/// evaluated from a grid point s0 up to s (linear interpolation between grid points).
inline Complex f_tilde_multi(const SpectralTrajectory& traj, std::size_t k, std::size_t alpha, std::size_t beta, double s, double s0,
                             const ChainWeight& weight = {}) {
  if (s < s0) throw DomainError(detail::concat("f_tilde: s = ", s, " precedes s0 = ", s0));
  const std::size_t i0 = numerics::grid_index(traj.grid, s0);
  const auto path = detail::f_tilde_path(traj, k, alpha, beta, i0, weight);
  return numerics::interpolate<Complex>(detail::tail(traj.grid, i0), std::span<const Complex>(path), s);
}

inline Complex f_tilde(const SpectralTrajectory& traj, std::size_t alpha, std::size_t beta, double s, double s0) {
  detail::require_block(traj, alpha);
  detail::require_block(traj, beta);
  if (traj.block_dim(alpha) != 1 || traj.block_dim(beta) != 1) {
    throw WrongKindError("f_tilde needs one-dimensional blocks; use f_tilde_multi");
  }
  return f_tilde_multi(traj, 0, alpha, beta, s, s0);
}

/// Pointwise adiabaticity coefficients on grid points s_{i0}..1.
struct XiProfile {
  std::vector<double> grid;
  std::vector<Complex> f_tilde;
  std::vector<Complex> gap;
  std::vector<double> xi1;
  std::vector<double> xi2;
  /// |int_{s0}^s F-tilde exp(tau int G)| by trapezoid.
  std::vector<double> g;
  /// Triangle-inequality bound xi1(s) + |F(s0)/(tau G(s0))| + int xi2.
  std::vector<double> bound;

  double xi1_max() const { return xi1.empty() ? 0.0 : *std::max_element(xi1.begin(), xi1.end()); }
  double xi2_max() const { return xi2.empty() ? 0.0 : *std::max_element(xi2.begin(), xi2.end()); }
  double g_max() const { return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end()); }
};

struct XiOptions {
  std::size_t k = 0;
  double s0 = 0.0;
  ChainWeight weight;
};

/// Xi1(s) = |F e^{tau int G} / (tau G)|, Xi2(s) = |(1/tau) d/ds[F/G] e^{tau int G}|,
/// computed in log space; the imaginary part of int G only enters the oracle g.
inline XiProfile xi_coefficients(const SpectralTrajectory& traj, std::size_t alpha, std::size_t beta, double tau,
                                 const XiOptions& opts = {}) {
  if (!(tau > 0.0)) throw ParameterError("xi_coefficients: tau must be positive");
  detail::require_block(traj, alpha);
  detail::require_block(traj, beta);
  const std::size_t i0 = numerics::grid_index(traj.grid, opts.s0);
  const std::size_t n = traj.size() - i0;
  if (n < 2) throw DomainError("xi_coefficients: s0 leaves fewer than two grid points");

  XiProfile p;
  p.grid.assign(traj.grid.begin() + static_cast<std::ptrdiff_t>(i0), traj.grid.end());
  p.gap.resize(n);
  double scale = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& blocks = traj.bases[i0 + j].blocks;
    p.gap[j] = blocks[alpha].eigenvalue - blocks[beta].eigenvalue;
    scale = std::max({scale, std::abs(blocks[alpha].eigenvalue), std::abs(blocks[beta].eigenvalue)});
  }
  std::vector<double> degenerate;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(p.gap[j]) <= 1e-12 * scale) degenerate.push_back(p.grid[j]);
  }
  if (!degenerate.empty()) {
    throw GapDegenerateError(detail::concat("gap between blocks ", alpha, " and ", beta, " vanishes at ", degenerate.size(), " grid points"),
                             degenerate);
  }

  p.f_tilde = detail::f_tilde_path(traj, opts.k, alpha, beta, i0, opts.weight);
  const auto gap_int = numerics::cumulative_trapezoid<Complex>(p.grid, p.gap);
  std::vector<Complex> ratio(n);
  for (std::size_t j = 0; j < n; ++j) ratio[j] = p.f_tilde[j] / p.gap[j];
  const auto d_ratio = numerics::derivative<Complex>(p.grid, ratio);

  p.xi1.resize(n);
  p.xi2.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double growth = tau * gap_int[j].real();
    p.xi1[j] = detail::exp_abs(ratio[j], growth - std::log(tau));
    p.xi2[j] = detail::exp_abs(d_ratio[j], growth - std::log(tau));
  }

  // Oracle integrand F e^{tau int G}, shifted by the largest growth to stay finite.
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& v : gap_int) shift = std::max(shift, tau * v.real());
  std::vector<Complex> integrand(n);
  for (std::size_t j = 0; j < n; ++j) integrand[j] = p.f_tilde[j] * std::exp(tau * gap_int[j] - shift);
  const auto g_int = numerics::cumulative_trapezoid<Complex>(p.grid, integrand);
  const auto xi2_int = numerics::cumulative_trapezoid<double>(p.grid, p.xi2);
  const double start = std::abs(ratio[0]) / tau;
  p.g.resize(n);
  p.bound.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    p.g[j] = detail::exp_abs(g_int[j], shift);
    p.bound[j] = p.xi1[j] + start + xi2_int[j];
  }
  return p;
}

struct PairEntry {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t k = 0;
  double xi1_max = 0.0;
  double xi2_max = 0.0;
  double xi_max = 0.0;
  double g_max = 0.0;
  /// Set when an initial support is supplied and alpha is not part of it.
  bool dynamically_irrelevant = false;
};

struct AdiabaticityReport {
  double tau = 0.0;
  std::vector<PairEntry> pairs;
  /// Ordered pairs skipped because their gap vanishes somewhere on the grid.
  std::vector<std::pair<std::size_t, std::size_t>> excluded;
  std::vector<double> grid;

  /// max over beta (and k) of Xi_{alpha beta}.
  double xi_for_alpha(std::size_t alpha) const {
    double out = 0.0;
    for (const auto& e : pairs) {
      if (e.alpha == alpha) out = std::max(out, e.xi_max);
    }
    return out;
  }

  const PairEntry& entry(std::size_t alpha, std::size_t beta, std::size_t k = 0) const {
    for (const auto& e : pairs) {
      if (e.alpha == alpha && e.beta == beta && e.k == k) return e;
    }
    throw std::out_of_range(detail::concat("no report entry for pair (", alpha, ", ", beta, "), k = ", k));
  }
};

struct ReportOptions {
  /// Blocks present in the initial state; pairs with alpha outside are flagged.
  std::optional<std::vector<std::size_t>> initial_support;
  /// Audit mode: maximize over s0 on every s0_stride-th grid point instead of s0 = 0 only.
  bool all_s0 = false;
  std::size_t s0_stride = 10;
  ChainWeight weight;
};

inline AdiabaticityReport xi_max(const SpectralTrajectory& traj, double tau, const ReportOptions& opts = {}) {
  AdiabaticityReport report;
  report.tau = tau;
  report.grid = traj.grid;
  std::vector<double> s0_values{traj.grid.front()};
  if (opts.all_s0) {
    const std::size_t stride = std::max<std::size_t>(1, opts.s0_stride);
    for (std::size_t j = stride; j + 1 < traj.size(); j += stride) s0_values.push_back(traj.grid[j]);
  }
  for (std::size_t alpha = 0; alpha < traj.block_count(); ++alpha) {
    for (std::size_t beta = 0; beta < traj.block_count(); ++beta) {
      if (alpha == beta) continue;
      bool excluded = false;
      for (std::size_t k = 0; k < traj.block_dim(beta) && !excluded; ++k) {
        PairEntry e;
        e.alpha = alpha;
        e.beta = beta;
        e.k = k;
        try {
          for (double s0 : s0_values) {
            const auto prof = xi_coefficients(traj, alpha, beta, tau, XiOptions{k, s0, opts.weight});
            e.xi1_max = std::max(e.xi1_max, prof.xi1_max());
            e.xi2_max = std::max(e.xi2_max, prof.xi2_max());
            e.g_max = std::max(e.g_max, prof.g_max());
          }
        } catch (const GapDegenerateError&) {
          report.excluded.emplace_back(alpha, beta);
          excluded = true;
          break;
        }
        e.xi_max = std::max(e.xi1_max, e.xi2_max);
        if (opts.initial_support) {
          const auto& sup = *opts.initial_support;
          e.dynamically_irrelevant = std::find(sup.begin(), sup.end(), alpha) == sup.end();
        }
        report.pairs.push_back(e);
      }
    }
  }
  return report;
}

/// Flat table: pair, k, xi1_max, xi2_max, xi_max, g_max (k one-based).
inline void write_report(std::ostream& os, const AdiabaticityReport& report) {
  csv::write_row(os, {"pair", "k", "xi1_max", "xi2_max", "xi_max", "g_max"});
  for (const auto& e : report.pairs) {
    csv::write_row(os, {std::to_string(e.alpha) + "-" + std::to_string(e.beta), std::to_string(e.k + 1), csv::number(e.xi1_max),
                        csv::number(e.xi2_max), csv::number(e.xi_max), csv::number(e.g_max)});
  }
}

/// G_{alpha beta}(s) for s on the grid, integration from s0 = 0.
inline double g_oracle(const SpectralTrajectory& traj, std::size_t alpha, std::size_t beta, double s, double tau) {
  const auto prof = xi_coefficients(traj, alpha, beta, tau);
  return prof.g[numerics::grid_index(traj.grid, s)];
}

}  // namespace openad
