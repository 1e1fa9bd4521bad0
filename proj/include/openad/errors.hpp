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

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace openad {

/// Base class for numerical failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or indices do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A time or normalized time outside the range an object is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Jordan chain construction could not decide the rank structure of a cluster.
class DefectiveDecompositionError : public Error {
 public:
  using Error::Error;
};

/// Closed-form spectrum evaluated at an exceptional (degenerate) point.
class DegenerateSpectrumError : public Error {
 public:
  using Error::Error;
};

/// Two tracked eigenvalue paths met on the grid.
class CrossingError : public Error {
 public:
  CrossingError(const std::string& what, double s) : Error(what), s_(s) {}
  double s() const noexcept { return s_; }

 private:
  double s_;
};

class TrackingError : public Error {
 public:
  using Error::Error;
};

/// The gap lambda_alpha - lambda_beta vanishes at the listed grid points.
class GapDegenerateError : public Error {
 public:
  GapDegenerateError(const std::string& what, std::vector<double> s_values)
      : Error(what), s_values_(std::move(s_values)) {}
  const std::vector<double>& s_values() const noexcept { return s_values_; }

 private:
  std::vector<double> s_values_;
};

class CoefficientError : public Error {
 public:
  CoefficientError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class WrongKindError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class LogDomainError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename... Args>
std::string concat(const Args&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

}  // namespace detail
}  // namespace openad
