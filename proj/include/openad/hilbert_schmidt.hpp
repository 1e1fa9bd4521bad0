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

#include <cmath>
#include <cstddef>
#include <vector>

#include "openad/errors.hpp"
#include "openad/types.hpp"

namespace openad {

/// Orthogonal operator basis {sigma_n} of the D_S x D_S matrices.
///
/// Invariants checked on construction: sigma_0 is the identity,
/// tr(sigma_n sigma_m^dag) = D_S delta_nm and tr(sigma_n) = 0 for n >= 1.
class OperatorBasis {
 public:
  OperatorBasis(std::size_t dim_s, std::vector<Matrix> elements) : dim_s_(dim_s), elements_(std::move(elements)) {
    validate();
  }

  std::size_t dim_s() const noexcept { return dim_s_; }
  /// Number of elements, D_S^2.
  std::size_t size() const noexcept { return elements_.size(); }
  const Matrix& operator[](std::size_t n) const { return elements_.at(n); }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }

 private:
  void validate() const {
    if (dim_s_ == 0) throw ParameterError("basis dimension must be positive");
    if (elements_.size() != dim_s_ * dim_s_) {
      throw DimensionError(detail::concat("basis needs ", dim_s_ * dim_s_, " elements, got ", elements_.size()));
    }
    const auto d = static_cast<Eigen::Index>(dim_s_);
    for (const auto& e : elements_) {
      if (e.rows() != d || e.cols() != d) throw DimensionError("basis element has wrong shape");
    }
    constexpr double tol = 1e-12;
    if ((elements_[0] - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
      throw ParameterError("sigma_0 must be the identity");
    }
    for (std::size_t n = 0; n < elements_.size(); ++n) {
      if (n > 0 && std::abs(elements_[n].trace()) > tol * static_cast<double>(dim_s_)) {
        throw ParameterError(detail::concat("basis element ", n, " is not traceless"));
      }
      for (std::size_t m = 0; m < elements_.size(); ++m) {
        const Complex ip = (elements_[n] * elements_[m].adjoint()).trace();
        const double expected = n == m ? static_cast<double>(dim_s_) : 0.0;
        if (std::abs(ip - expected) > tol * static_cast<double>(dim_s_)) {
          throw ParameterError(detail::concat("basis elements ", n, ", ", m, " violate tr(s_n s_m^dag) = D delta_nm"));
        }
      }
    }
  }

  std::size_t dim_s_;
  std::vector<Matrix> elements_;
};

namespace detail {

inline Matrix pauli(int which) {
  Matrix p(2, 2);
  switch (which) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, -1i, 1i, 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace detail

inline Matrix pauli_x() { return detail::pauli(1); }
inline Matrix pauli_y() { return detail::pauli(2); }
inline Matrix pauli_z() { return detail::pauli(3); }

/// Tensor products of {1, X, Y, Z}, first qubit most significant.
inline OperatorBasis pauli_basis(int n_qubits) {
  if (n_qubits < 1) throw ParameterError("pauli_basis needs n_qubits >= 1");
  std::size_t count = 1;
  for (int q = 0; q < n_qubits; ++q) count *= 4;
  std::vector<Matrix> elements;
  elements.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Matrix m = Matrix::Identity(1, 1);
    std::size_t rem = idx, place = count / 4;
    for (int q = 0; q < n_qubits; ++q) {
      const auto digit = static_cast<int>(rem / place);
      rem %= place;
      place = place > 1 ? place / 4 : 1;
      m = detail::kron(m, detail::pauli(digit));
    }
    elements.push_back(std::move(m));
  }
  return OperatorBasis(std::size_t{1} << n_qubits, std::move(elements));
}

/// Pauli basis for a Hilbert dimension that is a power of two.
inline OperatorBasis pauli_basis_for_dim(std::size_t dim_s) {
  int qubits = 0;
  std::size_t d = 1;
  while (d < dim_s) {
    d *= 2;
    ++qubits;
  }
  if (d != dim_s || qubits == 0) throw DimensionError(detail::concat("no Pauli basis for dimension ", dim_s));
  return pauli_basis(qubits);
}

/// D_S^2 components rho_n = tr(rho sigma_n^dag).
class CoherenceVector {
 public:
  CoherenceVector() = default;
  CoherenceVector(Vector components, std::size_t basis_dim) : components_(std::move(components)), basis_dim_(basis_dim) {
    if (static_cast<std::size_t>(components_.size()) != basis_dim_ * basis_dim_) {
      throw DimensionError(detail::concat("coherence vector needs ", basis_dim_ * basis_dim_, " components"));
    }
  }

  const Vector& components() const noexcept { return components_; }
  Vector& components() noexcept { return components_; }
  std::size_t basis_dim() const noexcept { return basis_dim_; }
  Complex operator[](Eigen::Index n) const { return components_(n); }
  bool finite() const { return components_.allFinite(); }

 private:
  Vector components_;
  std::size_t basis_dim_ = 0;
};

inline CoherenceVector vectorize(const Matrix& rho, const OperatorBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.dim_s());
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(detail::concat("vectorize: matrix is ", rho.rows(), "x", rho.cols(), ", basis dimension ", d));
  }
  Vector v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t n = 0; n < basis.size(); ++n) {
    // tr(rho sigma^dag) = sum_ij rho_ij conj(sigma_ij)
    v(static_cast<Eigen::Index>(n)) = (rho.array() * basis[n].conjugate().array()).sum();
  }
  return CoherenceVector(std::move(v), basis.dim_s());
}

inline Matrix devectorize(const Vector& components, const OperatorBasis& basis) {
  if (static_cast<std::size_t>(components.size()) != basis.size()) {
    throw DimensionError(detail::concat("devectorize: ", components.size(), " components for basis of size ", basis.size()));
  }
  const auto d = static_cast<Eigen::Index>(basis.dim_s());
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t n = 0; n < basis.size(); ++n) rho += components(static_cast<Eigen::Index>(n)) * basis[n];
  return rho / static_cast<double>(basis.dim_s());
}

inline Matrix devectorize(const CoherenceVector& v, const OperatorBasis& basis) {
  if (v.basis_dim() != basis.dim_s()) throw DimensionError("devectorize: basis dimension mismatch");
  return devectorize(v.components(), basis);
}

/// Hilbert-Schmidt inner product (1/D) tr(xi1^dag xi2).
inline Complex hs_inner(const Matrix& xi1, const Matrix& xi2) {
  if (xi1.rows() != xi2.rows() || xi1.cols() != xi2.cols() || xi1.rows() != xi1.cols()) {
    throw DimensionError("hs_inner: operands must be square and of equal size");
  }
  return (xi1.adjoint() * xi2).trace() / static_cast<double>(xi1.rows());
}

/// Same product from coherence components: (1/D^2) sum_n conj(x_n) y_n.
inline Complex hs_inner(const CoherenceVector& xi1, const CoherenceVector& xi2) {
  if (xi1.basis_dim() != xi2.basis_dim()) throw DimensionError("hs_inner: basis dimension mismatch");
  const double d = static_cast<double>(xi1.basis_dim());
  return xi1.components().dot(xi2.components()) / (d * d);
}

}  // namespace openad
