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

// Synthetic trajectories with a known Jordan structure:
//   L(s) = S0 K(s) J(s) K(s)^{-1} S0^{-1},
// J(s) = (l0(s) + U) (+) l1(s) (+) l2(s) and K(s) = (a + b U) (+) k1 (+) k2.
// K commutes with J, so the columns of S0 K(s) are valid chains in a smooth,
// non-trivial gauge, and C = K^{-1} K' commutes with U.

#include <cmath>
#include <vector>

#include "openad/spectral.hpp"
#include "oracles.hpp"

namespace synthetic {

using openad::Complex;
using openad::Matrix;

struct Model {
  Matrix s0;
  bool generic_gauge = false;  // replace K by a full s-dependent similarity

  Complex l0(double s) const { return Complex(-0.4 - 0.2 * s, 0.3 * s); }
  Complex l1(double s) const { return Complex(-1.2, 0.5 + 0.4 * s * s); }
  Complex l2(double s) const { return Complex(-2.0 + 0.3 * std::sin(s), -0.6); }

  Matrix jordan(double s) const {
    Matrix j = Matrix::Zero(4, 4);
    j(0, 0) = j(1, 1) = l0(s);
    j(0, 1) = 1.0;
    j(2, 2) = l1(s);
    j(3, 3) = l2(s);
    return j;
  }

  Matrix gauge(double s) const {
    Matrix k = Matrix::Zero(4, 4);
    const Complex a = std::exp(Complex(0.3 * s, 0.8 * s)), b = Complex(0.5 * std::sin(2 * s), 0.2 * s);
    k(0, 0) = k(1, 1) = a;
    k(0, 1) = b;
    k(2, 2) = 1.0 + 0.5 * s;
    k(3, 3) = std::exp(Complex(0, -1.1 * s));
    if (generic_gauge) {
      Matrix g = Matrix::Identity(4, 4);
      g(1, 0) = 0.4 * s;  // mixes the chain against the shift structure
      g(2, 1) = 0.3 * s * s;
      return g;
    }
    return k;
  }

  Matrix right(double s) const { return s0 * gauge(s); }
  Matrix generator(double s) const {
    const Matrix r = right(s);
    return r * jordan(s) * r.inverse();
  }

  openad::JordanBasis basis(double s) const {
    const Matrix r = right(s), l = r.inverse();
    openad::JordanBasis b;
    b.time = s;
    openad::JordanBlockChain c0;
    c0.eigenvalue = l0(s);
    c0.right_chain = {r.col(0), r.col(1)};
    c0.left_chain = {l.row(0), l.row(1)};
    openad::JordanBlockChain c1;
    c1.eigenvalue = l1(s);
    c1.right_chain = {r.col(2)};
    c1.left_chain = {l.row(2)};
    openad::JordanBlockChain c2;
    c2.eigenvalue = l2(s);
    c2.right_chain = {r.col(3)};
    c2.left_chain = {l.row(3)};
    b.blocks = {c0, c1, c2};
    return b;
  }
};

inline Model make(unsigned seed, bool generic_gauge = false) {
  Model m;
  m.s0 = oracle::defective(0.0, 0.0, 0.0, seed).s;
  m.generic_gauge = generic_gauge;
  return m;
}

inline openad::SpectralTrajectory trajectory(const Model& m, double tau, std::size_t n) {
  return openad::trajectory_from_bases(openad::numerics::linspace(0.0, 1.0, n), tau, [&](double s) { return m.basis(s); },
                                       [&](double s) { return m.generator(s); });
}

}  // namespace synthetic
