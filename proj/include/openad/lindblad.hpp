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

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "openad/errors.hpp"
#include "openad/hilbert_schmidt.hpp"
#include "openad/numerics.hpp"
#include "openad/types.hpp"

namespace openad {

using OperatorPath = std::function<Matrix(double)>;

/// Time-local Lindblad generator with hbar = 1.
///
/// hamiltonian and jump_ops are sampled in physical time t in [0, horizon].
struct LindbladModel {
  std::size_t dim_s = 2;
  OperatorPath hamiltonian;
  std::vector<OperatorPath> jump_ops;
  double horizon = 1.0;

  void check_time(double t) const {
    const double slack = 1e-12 * std::max(1.0, horizon);
    if (!(t >= -slack && t <= horizon + slack)) {
      throw DomainError(detail::concat("t = ", t, " outside horizon [0, ", horizon, "]"));
    }
  }
};

/// Matrix of the generator in an operator basis.
struct Superoperator {
  Matrix matrix;
  std::optional<double> time;
};

namespace detail {

inline Matrix apply_generator(const std::optional<Matrix>& h, const std::vector<Matrix>& jumps, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  if (h) out.noalias() += Complex(0.0, -1.0) * numerics::commutator(*h, rho);
  for (const auto& g : jumps) {
    out.noalias() += g * rho * g.adjoint();
    out.noalias() -= 0.5 * numerics::anticommutator(g.adjoint() * g, rho);
  }
  return out;
}

inline std::pair<std::optional<Matrix>, std::vector<Matrix>> sample(const LindbladModel& model, double t) {
  std::optional<Matrix> h;
  if (model.hamiltonian) h = model.hamiltonian(t);
  std::vector<Matrix> jumps;
  jumps.reserve(model.jump_ops.size());
  for (const auto& j : model.jump_ops) jumps.push_back(j(t));
  return {std::move(h), std::move(jumps)};
}

}  // namespace detail

/// -i[H, rho] + sum_n (G rho G^dag - {G^dag G, rho}/2).
inline Matrix generator_action(const LindbladModel& model, double t, const Matrix& rho) {
  model.check_time(t);
  const auto d = static_cast<Eigen::Index>(model.dim_s);
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(detail::concat("generator_action: rho is ", rho.rows(), "x", rho.cols(), ", model dimension ", d));
  }
  const auto [h, jumps] = detail::sample(model, t);
  return detail::apply_generator(h, jumps, rho);
}

/// L_ki = (1/D) tr(sigma_k^dag L[sigma_i]).
inline Superoperator superoperator_matrix(const LindbladModel& model, double t, const OperatorBasis& basis) {
  if (basis.dim_s() != model.dim_s) throw DimensionError("superoperator_matrix: basis does not match model dimension");
  model.check_time(t);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const double inv_d = 1.0 / static_cast<double>(basis.dim_s());
  Matrix l(n, n);
  const auto [h, jumps] = detail::sample(model, t);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix image = detail::apply_generator(h, jumps, basis[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < n; ++k) {
      l(k, i) = inv_d * (basis[static_cast<std::size_t>(k)].conjugate().array() * image.array()).sum();
    }
  }
  return Superoperator{std::move(l), t};
}

}  // namespace openad
