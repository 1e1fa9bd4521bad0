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
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "openad/errors.hpp"
#include "openad/types.hpp"

// Grid calculus shared by the spectral, conditions and evolution modules.
// Grids are strictly increasing but not necessarily uniform.

namespace openad::numerics {

inline void require_grid(std::span<const double> grid, std::size_t min_points = 2) {
  if (grid.size() < min_points) {
    throw DimensionError(detail::concat("grid needs at least ", min_points, " points, got ", grid.size()));
  }
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1])) {
      throw DimensionError(detail::concat("grid not strictly increasing at index ", j));
    }
  }
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = a + (b - a) * static_cast<double>(j) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

/// Running integral from grid[0] by the composite trapezoid rule.
template <typename T>
std::vector<T> cumulative_trapezoid(std::span<const double> grid, std::span<const T> values) {
  if (grid.size() != values.size()) {
    throw DimensionError("cumulative_trapezoid: grid/value size mismatch");
  }
  std::vector<T> out(values.size());
  if (values.empty()) return out;
  out[0] = T{} * 0.0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    out[j] = out[j - 1] + 0.5 * (grid[j] - grid[j - 1]) * (values[j] + values[j - 1]);
  }
  return out;
}

template <typename T>
std::vector<T> cumulative_trapezoid(std::span<const double> grid, const std::vector<T>& values) {
  return cumulative_trapezoid<T>(grid, std::span<const T>(values));
}

/// Three-point weights for d/ds at index j (second order, one-sided at the ends).
struct StencilWeights {
  std::size_t first;
  double w[3];
};

inline StencilWeights derivative_stencil(std::span<const double> grid, std::size_t j) {
  const std::size_t n = grid.size();
  if (n < 3) {
    if (n < 2) throw DimensionError("derivative needs at least two grid points");
    const double h = grid[1] - grid[0];
    return {0, {-1.0 / h, 1.0 / h, 0.0}};
  }
  std::size_t i0 = j == 0 ? 0 : (j == n - 1 ? n - 3 : j - 1);
  const double x0 = grid[i0], x1 = grid[i0 + 1], x2 = grid[i0 + 2], x = grid[j];
  // Derivative of the Lagrange interpolant through (x0, x1, x2) evaluated at x.
  StencilWeights sw{i0, {}};
  sw.w[0] = ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2));
  sw.w[1] = ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2));
  sw.w[2] = ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  return sw;
}

template <typename T>
std::vector<T> derivative(std::span<const double> grid, std::span<const T> values) {
  if (grid.size() != values.size()) throw DimensionError("derivative: grid/value size mismatch");
  std::vector<T> out;
  out.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto sw = derivative_stencil(grid, j);
    T acc = sw.w[0] * values[sw.first];
    for (std::size_t k = 1; k < 3 && sw.first + k < values.size(); ++k) acc = acc + sw.w[k] * values[sw.first + k];
    out.push_back(acc);
  }
  return out;
}

template <typename T>
std::vector<T> derivative(std::span<const double> grid, const std::vector<T>& values) {
  return derivative<T>(grid, std::span<const T>(values));
}

/// Piecewise-linear interpolation; throws DomainError outside [grid.front(), grid.back()].
template <typename T>
T interpolate(std::span<const double> grid, std::span<const T> values, double s) {
  const double tol = 1e-12 * std::max(1.0, std::abs(grid.back() - grid.front()));
  if (s < grid.front() - tol || s > grid.back() + tol) {
    throw DomainError(detail::concat("s = ", s, " outside grid range [", grid.front(), ", ", grid.back(), "]"));
  }
  s = std::clamp(s, grid.front(), grid.back());
  auto it = std::upper_bound(grid.begin(), grid.end(), s);
  std::size_t j = it == grid.end() ? grid.size() - 1 : static_cast<std::size_t>(it - grid.begin());
  if (j == 0) return values[0];
  const double a = (s - grid[j - 1]) / (grid[j] - grid[j - 1]);
  return (1.0 - a) * values[j - 1] + a * values[j];
}

/// Index of the grid point equal to s (within 1e-9 of the local spacing).
inline std::size_t grid_index(std::span<const double> grid, double s) {
  auto it = std::lower_bound(grid.begin(), grid.end(), s);
  std::size_t best = grid.size();
  double best_dist = 0.0;
  for (auto cand : {it, it == grid.begin() ? it : it - 1}) {
    if (cand == grid.end()) continue;
    const double d = std::abs(*cand - s);
    if (best == grid.size() || d < best_dist) {
      best = static_cast<std::size_t>(cand - grid.begin());
      best_dist = d;
    }
  }
  const double span = grid.size() > 1 ? (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1) : 1.0;
  if (best == grid.size() || best_dist > 1e-9 * span) {
    throw DomainError(detail::concat("s = ", s, " is not a grid point of the trajectory"));
  }
  return best;
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

/// f(M) for Hermitian M via its eigendecomposition.
template <typename F>
Matrix hermitian_function(const Matrix& m, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success) throw Error("hermitian eigendecomposition failed");
  Eigen::VectorXd mapped = es.eigenvalues().unaryExpr([&](double x) { return f(x); });
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

/// Square root of a PSD matrix; eigenvalues in [-clip, 0) are treated as 0.
inline Matrix psd_sqrt(const Matrix& m, double clip = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -clip) {
    throw InvalidStateError(detail::concat("matrix not positive semidefinite: eigenvalue ", es.eigenvalues().minCoeff()));
  }
  return hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }
inline Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

}  // namespace openad::numerics
