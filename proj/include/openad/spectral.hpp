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
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "openad/csv.hpp"
#include "openad/errors.hpp"
#include "openad/hilbert_schmidt.hpp"
#include "openad/lindblad.hpp"
#include "openad/numerics.hpp"
#include "openad/parallel.hpp"
#include "openad/types.hpp"

namespace openad {

/// One Jordan block: L D^n = D^{n-1} + lambda D^n and E^n L = E^{n+1} + lambda E^n,
/// chains stored bottom-up (right_chain[0] is the eigenvector D^1).
struct JordanBlockChain {
  Complex eigenvalue{};
  std::vector<Vector> right_chain;
  std::vector<RowVector> left_chain;

  std::size_t block_dim() const noexcept { return right_chain.size(); }

  /// Multiplies the right chain by c and the left chain by 1/c.
  void rescale(Complex c) {
    for (auto& d : right_chain) d *= c;
    for (auto& e : left_chain) e /= c;
  }
};

struct JordanBasis {
  std::vector<JordanBlockChain> blocks;
  std::optional<double> time;

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.block_dim();
    return n;
  }

  std::size_t offset(std::size_t block) const {
    std::size_t n = 0;
    for (std::size_t a = 0; a < block; ++a) n += blocks.at(a).block_dim();
    return n;
  }

  std::vector<Complex> eigenvalues() const {
    std::vector<Complex> out;
    for (const auto& b : blocks) out.push_back(b.eigenvalue);
    return out;
  }

  /// Columns D_0^1 .. D_0^{N_0}, D_1^1, ...
  Matrix right_matrix() const {
    const auto n = static_cast<Eigen::Index>(total_dim());
    Matrix r(n, n);
    Eigen::Index col = 0;
    for (const auto& b : blocks) {
      for (const auto& d : b.right_chain) r.col(col++) = d;
    }
    return r;
  }

  Matrix left_matrix() const {
    const auto n = static_cast<Eigen::Index>(total_dim());
    Matrix l(n, n);
    Eigen::Index row = 0;
    for (const auto& b : blocks) {
      for (const auto& e : b.left_chain) l.row(row++) = e;
    }
    return l;
  }

  /// Block-diagonal Jordan form with ones on the superdiagonal inside blocks.
  Matrix jordan_matrix() const {
    const auto n = static_cast<Eigen::Index>(total_dim());
    Matrix j = Matrix::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
      const auto nb = static_cast<Eigen::Index>(b.block_dim());
      for (Eigen::Index i = 0; i < nb; ++i) {
        j(at + i, at + i) = b.eigenvalue;
        if (i + 1 < nb) j(at + i, at + i + 1) = 1.0;
      }
      at += nb;
    }
    return j;
  }
};

inline double default_cluster_tol(const Matrix& l) { return std::max(1e-7 * l.norm(), 1e-14); }

namespace detail {

inline bool eigen_order(Complex a, Complex b, double tol) {
  if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
  return a.imag() < b.imag();
}

inline Matrix orthonormal_columns(const Matrix& m, double rel_tol = 1e-10) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// D^1 unit norm, largest component real positive; the rest of the chain follows.
inline void fix_chain_gauge(JordanBlockChain& b) {
  const Vector& d1 = b.right_chain.front();
  Eigen::Index arg = 0;
  d1.cwiseAbs().maxCoeff(&arg);
  const Complex pivot = d1(arg);
  b.rescale(std::abs(pivot) / (pivot * d1.norm()));
}

inline std::vector<std::vector<Eigen::Index>> cluster_eigenvalues(const Vector& ev, double tol) {
  const auto n = ev.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  std::function<Eigen::Index(Eigen::Index)> find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(ev(i) - ev(j)) <= tol) parent[static_cast<std::size_t>(find(j))] = find(i);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> root_of_group;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = find(i);
    auto it = std::find(root_of_group.begin(), root_of_group.end(), r);
    if (it == root_of_group.end()) {
      root_of_group.push_back(r);
      groups.push_back({i});
    } else {
      groups[static_cast<std::size_t>(it - root_of_group.begin())].push_back(i);
    }
  }
  return groups;
}

// Chains for one eigenvalue cluster of algebraic multiplicity m.
inline std::vector<JordanBlockChain> cluster_chains(const Matrix& l, Complex lambda, std::size_t m, double tol) {
  const auto dim = l.rows();
  const Matrix a = l - lambda * Matrix::Identity(dim, dim);
  const double scale = std::max(1.0, a.norm());

  std::vector<Matrix> kernels{Matrix(dim, 0)};
  Matrix power = Matrix::Identity(dim, dim);
  while (static_cast<std::size_t>(kernels.back().cols()) < m) {
    const std::size_t k = kernels.size();
    if (k > m) {
      throw DefectiveDecompositionError(
          concat("kernel growth stalled for cluster at lambda = ", lambda, " (multiplicity ", m, ")"));
    }
    power = a * power;
    Eigen::JacobiSVD<Matrix> svd(power, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thr = tol * std::pow(scale, static_cast<double>(k - 1));
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > thr / 10.0 && sv(i) < thr * 10.0) {
        throw DefectiveDecompositionError(concat("ambiguous rank of (L - lambda)^", k, " for cluster at lambda = ", lambda,
                                                 ": singular value ", sv(i), " within a decade of threshold ", thr));
      }
      if (sv(i) > thr) ++rank;
    }
    const auto nullity = dim - rank;
    if (nullity <= kernels.back().cols()) {
      throw DefectiveDecompositionError(
          concat("no generalized eigenvectors at order ", k, " for cluster at lambda = ", lambda, " (multiplicity ", m, ")"));
    }
    if (static_cast<std::size_t>(nullity) > m) {
      throw DefectiveDecompositionError(concat("kernel of (L - lambda)^", k, " exceeds multiplicity ", m,
                                               " for cluster at lambda = ", lambda, "; cluster_tol too small"));
    }
    kernels.push_back(svd.matrixV().rightCols(nullity));
  }

  const std::size_t depth = kernels.size() - 1;
  struct Top {
    Vector x;
    std::size_t length;
  };
  std::vector<Top> tops;
  for (std::size_t k = depth; k >= 1; --k) {
    const auto grow = kernels[k].cols() - kernels[k - 1].cols();
    std::vector<Vector> existing;
    for (const auto& t : tops) {
      Vector v = t.x;
      for (std::size_t p = k; p < t.length; ++p) v = a * v;
      existing.push_back(v);
    }
    const auto fresh = grow - static_cast<Eigen::Index>(existing.size());
    if (fresh < 0) throw DefectiveDecompositionError(concat("inconsistent Jordan structure at lambda = ", lambda));
    if (fresh > 0) {
      Matrix span(dim, kernels[k - 1].cols() + static_cast<Eigen::Index>(existing.size()));
      span.leftCols(kernels[k - 1].cols()) = kernels[k - 1];
      for (std::size_t e = 0; e < existing.size(); ++e) span.col(kernels[k - 1].cols() + static_cast<Eigen::Index>(e)) = existing[e];
      const Matrix q = orthonormal_columns(span);
      const Matrix projected = kernels[k] - q * (q.adjoint() * kernels[k]);
      Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeThinU);
      if (svd.singularValues()(fresh - 1) < 1e-6) {
        throw DefectiveDecompositionError(concat("cannot extend Jordan chains at order ", k, " for lambda = ", lambda));
      }
      for (Eigen::Index c = 0; c < fresh; ++c) tops.push_back({svd.matrixU().col(c), k});
    }
  }

  std::vector<JordanBlockChain> out;
  for (const auto& t : tops) {
    JordanBlockChain b;
    b.eigenvalue = lambda;
    b.right_chain.resize(t.length);
    Vector v = t.x;
    for (std::size_t n = t.length; n-- > 0;) {
      b.right_chain[n] = v;
      v = a * v;
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline void fill_left_chains(JordanBasis& basis) {
  const Matrix r = basis.right_matrix();
  Eigen::FullPivLU<Matrix> lu(r);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) {
    throw DefectiveDecompositionError(concat("right quasi-eigenvectors are numerically dependent (rcond ", lu.rcond(), ")"));
  }
  const Matrix left = lu.inverse();
  Eigen::Index row = 0;
  for (auto& b : basis.blocks) {
    b.left_chain.clear();
    for (std::size_t n = 0; n < b.block_dim(); ++n) b.left_chain.push_back(left.row(row++));
  }
}

}  // namespace detail

/// Jordan decomposition with bi-orthonormal chains.
///
/// Eigenvalues closer than cluster_tol are merged and the chains of the merged
/// cluster are built from the kernels of (L - lambda)^k. Blocks are sorted by
/// (Re lambda descending, Im lambda ascending, longer chains first).
inline JordanBasis decompose(const Superoperator& l, std::optional<double> cluster_tol = std::nullopt) {
  const Matrix& m = l.matrix;
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("decompose: superoperator must be square");
  if (!m.allFinite()) throw DomainError("decompose: superoperator has non-finite entries");
  const double tol = cluster_tol.value_or(default_cluster_tol(m));
  if (!(tol > 0.0)) throw ParameterError("decompose: cluster_tol must be positive");

  Eigen::ComplexEigenSolver<Matrix> es(m, true);
  if (es.info() != Eigen::Success) throw DefectiveDecompositionError("eigenvalue iteration did not converge");
  const Vector ev = es.eigenvalues();

  JordanBasis basis;
  basis.time = l.time;
  for (const auto& group : detail::cluster_eigenvalues(ev, tol)) {
    Complex mean = 0.0;
    for (auto i : group) mean += ev(i);
    mean /= static_cast<double>(group.size());
    if (group.size() == 1) {
      JordanBlockChain b;
      b.eigenvalue = ev(group[0]);
      b.right_chain.push_back(es.eigenvectors().col(group[0]));
      basis.blocks.push_back(std::move(b));
    } else {
      for (auto& b : detail::cluster_chains(m, mean, group.size(), tol)) basis.blocks.push_back(std::move(b));
    }
  }
  std::stable_sort(basis.blocks.begin(), basis.blocks.end(), [tol](const JordanBlockChain& a, const JordanBlockChain& b) {
    if (std::abs(a.eigenvalue - b.eigenvalue) <= tol) return a.block_dim() > b.block_dim();
    return detail::eigen_order(a.eigenvalue, b.eigenvalue, tol);
  });
  for (auto& b : basis.blocks) detail::fix_chain_gauge(b);
  detail::fill_left_chains(basis);
  return basis;
}

/// Largest chain-relation residual over all blocks, right and left.
inline double left_right_residual(const JordanBasis& basis, const Superoperator& l) {
  const Matrix& m = l.matrix;
  if (static_cast<Eigen::Index>(basis.total_dim()) != m.rows()) throw DimensionError("left_right_residual: dimension mismatch");
  double worst = 0.0;
  for (const auto& b : basis.blocks) {
    const std::size_t nb = b.block_dim();
    for (std::size_t n = 0; n < nb; ++n) {
      Vector r = m * b.right_chain[n] - b.eigenvalue * b.right_chain[n];
      if (n > 0) r -= b.right_chain[n - 1];
      worst = std::max(worst, r.norm());
      RowVector e = b.left_chain[n] * m - b.eigenvalue * b.left_chain[n];
      if (n + 1 < nb) e -= b.left_chain[n + 1];
      worst = std::max(worst, e.norm());
    }
  }
  return worst;
}

/// max |E R - 1| over all index pairs.
inline double biorthonormality_error(const JordanBasis& basis) {
  const Matrix g = basis.left_matrix() * basis.right_matrix();
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// max |sum_n D^n E^n - 1|.
inline double completeness_error(const JordanBasis& basis) {
  const Matrix g = basis.right_matrix() * basis.left_matrix();
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// Decompositions along a normalized-time grid s_j with derivative couplings
/// couplings[j](row, col) = <E_row(s_j)| d_s D_col(s_j)>, rows and columns in
/// the flattened chain order of JordanBasis.
struct SpectralTrajectory {
  std::vector<double> grid;
  double tau = 1.0;
  std::vector<JordanBasis> bases;
  std::vector<Matrix> generators;
  std::vector<Matrix> couplings;

  std::size_t size() const noexcept { return grid.size(); }
  std::size_t block_count() const { return bases.empty() ? 0 : bases.front().blocks.size(); }
  std::size_t block_dim(std::size_t alpha) const { return bases.front().blocks.at(alpha).block_dim(); }
  std::size_t offset(std::size_t alpha) const { return bases.front().offset(alpha); }

  std::vector<Complex> eigenvalue_path(std::size_t alpha) const {
    std::vector<Complex> out;
    out.reserve(bases.size());
    for (const auto& b : bases) out.push_back(b.blocks.at(alpha).eigenvalue);
    return out;
  }

  /// <E_beta^k(s_j)| d_s D_alpha^n(s_j)>, chain indices zero-based.
  Complex coupling(std::size_t j, std::size_t beta, std::size_t k, std::size_t alpha, std::size_t n) const {
    if (k >= block_dim(beta) || n >= block_dim(alpha)) throw std::out_of_range("coupling: chain index out of range");
    return couplings.at(j)(static_cast<Eigen::Index>(offset(beta) + k), static_cast<Eigen::Index>(offset(alpha) + n));
  }

  std::vector<Complex> coupling_path(std::size_t beta, std::size_t k, std::size_t alpha, std::size_t n) const {
    std::vector<Complex> out;
    out.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) out.push_back(coupling(j, beta, k, alpha, n));
    return out;
  }
};

namespace detail {

inline void compute_couplings(SpectralTrajectory& traj) {
  std::vector<Matrix> rights;
  rights.reserve(traj.bases.size());
  for (const auto& b : traj.bases) rights.push_back(b.right_matrix());
  const auto d_rights = numerics::derivative<Matrix>(traj.grid, rights);
  traj.couplings.clear();
  traj.couplings.reserve(traj.bases.size());
  for (std::size_t j = 0; j < traj.bases.size(); ++j) traj.couplings.push_back(traj.bases[j].left_matrix() * d_rights[j]);
}

inline void check_structure(const JordanBasis& ref, const JordanBasis& cur, double s) {
  bool same = ref.blocks.size() == cur.blocks.size();
  if (same) {
    std::vector<std::size_t> a, b;
    for (const auto& x : ref.blocks) a.push_back(x.block_dim());
    for (const auto& x : cur.blocks) b.push_back(x.block_dim());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    same = a == b;
  }
  if (!same) throw CrossingError(concat("Jordan structure changes at s = ", s, " (eigenvalues coalesce)"), s);
}

}  // namespace detail

struct TrackOptions {
  std::optional<double> cluster_tol;
  unsigned jobs = 1;
};

/// Decomposes generators[j] (sampled at s_j) and follows each block along the
/// grid by maximal |<E_prev|D_cur>| overlap, with the phase of D^1 kept
/// continuous. Per-point decompositions run concurrently; matching is a
/// sequential pass.
inline SpectralTrajectory track_generators(std::vector<double> grid, double tau, std::vector<Matrix> generators,
                                           const TrackOptions& opts = {}) {
  numerics::require_grid(grid, 3);
  if (grid.front() < 0.0 || grid.back() > 1.0) throw DomainError("track_spectrum: grid must lie in [0, 1]");
  if (generators.size() != grid.size()) throw DimensionError("track_spectrum: one generator per grid point required");

  SpectralTrajectory traj;
  traj.grid = std::move(grid);
  traj.tau = tau;
  traj.generators = std::move(generators);
  traj.bases.resize(traj.grid.size());
  std::vector<double> tols(traj.grid.size());
  parallel_for(traj.grid.size(), opts.jobs, [&](std::size_t j) {
    tols[j] = opts.cluster_tol.value_or(default_cluster_tol(traj.generators[j]));
    traj.bases[j] = decompose(Superoperator{traj.generators[j], traj.grid[j] * tau}, tols[j]);
  });

  auto coincide = [](const JordanBasis& basis, double tol, double s) {
    for (std::size_t a = 0; a < basis.blocks.size(); ++a) {
      for (std::size_t b = a + 1; b < basis.blocks.size(); ++b) {
        if (std::abs(basis.blocks[a].eigenvalue - basis.blocks[b].eigenvalue) <= tol) {
          throw CrossingError(detail::concat("eigenvalues ", basis.blocks[a].eigenvalue, " and ", basis.blocks[b].eigenvalue,
                                             " coincide at s = ", s), s);
        }
      }
    }
  };
  coincide(traj.bases[0], tols[0], traj.grid[0]);

  for (std::size_t j = 1; j < traj.grid.size(); ++j) {
    const double s = traj.grid[j];
    const JordanBasis& prev = traj.bases[j - 1];
    JordanBasis& cur = traj.bases[j];
    detail::check_structure(prev, cur, s);
    const std::size_t nb = prev.blocks.size();
    coincide(cur, tols[j], s);

    Eigen::MatrixXd score(nb, nb);
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& pa = prev.blocks[a];
        const auto& cb = cur.blocks[b];
        score(a, b) = pa.block_dim() == cb.block_dim() ? std::abs((pa.left_chain.front() * cb.right_chain.front()).value()) : -1.0;
      }
    }
    // Greedy assignment; the winner must clearly dominate its row and column.
    std::vector<int> match(nb, -1);
    std::vector<bool> taken(nb, false);
    for (std::size_t round = 0; round < nb; ++round) {
      double best = -1.0;
      Eigen::Index ba = -1, bb = -1;
      for (std::size_t a = 0; a < nb; ++a) {
        if (match[a] >= 0) continue;
        for (std::size_t b = 0; b < nb; ++b) {
          if (!taken[b] && score(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) > best) {
            best = score(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            ba = static_cast<Eigen::Index>(a);
            bb = static_cast<Eigen::Index>(b);
          }
        }
      }
      if (best <= 0.0) throw TrackingError(detail::concat("no overlap to continue block ", ba, " at s = ", s));
      double runner = 0.0;
      for (std::size_t b = 0; b < nb; ++b) {
        if (!taken[b] && static_cast<Eigen::Index>(b) != bb) runner = std::max(runner, score(ba, static_cast<Eigen::Index>(b)));
      }
      for (std::size_t a = 0; a < nb; ++a) {
        if (match[a] < 0 && static_cast<Eigen::Index>(a) != ba) runner = std::max(runner, score(static_cast<Eigen::Index>(a), bb));
      }
      if (runner > 0.5 * best) {
        throw TrackingError(detail::concat("ambiguous block matching at s = ", s, " (overlaps ", best, " vs ", runner, ")"));
      }
      match[static_cast<std::size_t>(ba)] = static_cast<int>(bb);
      taken[static_cast<std::size_t>(bb)] = true;
    }

    std::vector<JordanBlockChain> ordered(nb);
    for (std::size_t a = 0; a < nb; ++a) {
      JordanBlockChain b = std::move(cur.blocks[static_cast<std::size_t>(match[a])]);
      const Complex ov = prev.blocks[a].right_chain.front().dot(b.right_chain.front());
      if (std::abs(ov) > 0.0) b.rescale(std::abs(ov) / ov);
      ordered[a] = std::move(b);
    }
    cur.blocks = std::move(ordered);

    // Real paths that swap order between samples.
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = a + 1; b < nb; ++b) {
        const Complex d0 = prev.blocks[a].eigenvalue - prev.blocks[b].eigenvalue;
        const Complex d1 = cur.blocks[a].eigenvalue - cur.blocks[b].eigenvalue;
        if (std::abs(d0.imag()) <= tols[j] && std::abs(d1.imag()) <= tols[j] && d0.real() * d1.real() < 0.0) {
          const double s_cross = traj.grid[j - 1] + (s - traj.grid[j - 1]) * d0.real() / (d0.real() - d1.real());
          throw CrossingError(detail::concat("eigenvalues of blocks ", a, " and ", b, " cross near s = ", s_cross), s_cross);
        }
      }
    }
  }
  detail::compute_couplings(traj);
  return traj;
}

inline SpectralTrajectory track_spectrum(const LindbladModel& model, std::vector<double> grid, const OperatorBasis& basis,
                                         const TrackOptions& opts = {}) {
  std::vector<Matrix> gens(grid.size());
  parallel_for(grid.size(), opts.jobs,
               [&](std::size_t j) { gens[j] = superoperator_matrix(model, grid[j] * model.horizon, basis).matrix; });
  return track_generators(std::move(grid), model.horizon, std::move(gens), opts);
}

/// Same, in the Pauli basis (dim_s must be a power of two).
inline SpectralTrajectory track_spectrum(const LindbladModel& model, std::vector<double> grid, const TrackOptions& opts = {}) {
  return track_spectrum(model, std::move(grid), pauli_basis_for_dim(model.dim_s), opts);
}

using BasisProvider = std::function<JordanBasis(double s)>;
using GeneratorProvider = std::function<Matrix(double s)>;

/// Trajectory from an analytic basis (already continuous; no matching or
/// re-gauging). The generator provider is optional and only used for
/// residual reporting.
inline SpectralTrajectory trajectory_from_bases(std::vector<double> grid, double tau, const BasisProvider& bases,
                                                const GeneratorProvider& generators = {}) {
  numerics::require_grid(grid, 3);
  SpectralTrajectory traj;
  traj.grid = std::move(grid);
  traj.tau = tau;
  for (double s : traj.grid) {
    traj.bases.push_back(bases(s));
    if (generators) traj.generators.push_back(generators(s));
  }
  for (std::size_t j = 1; j < traj.bases.size(); ++j) detail::check_structure(traj.bases[0], traj.bases[j], traj.grid[j]);
  detail::compute_couplings(traj);
  return traj;
}

/// Columnar dump: s, Re/Im of each tracked eigenvalue, chain residual.
inline void write_spectrum(std::ostream& os, const SpectralTrajectory& traj) {
  std::vector<std::string> header{"s"};
  for (std::size_t a = 0; a < traj.block_count(); ++a) {
    header.push_back("re_lambda_" + std::to_string(a));
    header.push_back("im_lambda_" + std::to_string(a));
  }
  header.push_back("residual");
  csv::write_row(os, header);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    std::vector<std::string> row{csv::number(traj.grid[j])};
    for (const auto& b : traj.bases[j].blocks) {
      row.push_back(csv::number(b.eigenvalue.real()));
      row.push_back(csv::number(b.eigenvalue.imag()));
    }
    const double res = traj.generators.empty() ? std::nan("")
                                               : left_right_residual(traj.bases[j], Superoperator{traj.generators[j], std::nullopt});
    row.push_back(csv::number(res));
    csv::write_row(os, row);
  }
}

}  // namespace openad
