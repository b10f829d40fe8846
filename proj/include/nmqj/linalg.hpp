// Copyright 2026 The nmqj Authors
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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nmqj {

// hbar = 1 throughout: energies and rates share inverse-time units.

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& where, Index expected, Index got);
};

class NotHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pure-state amplitude vector. Not necessarily normalized; see is_normalized().
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Index dim);
  explicit StateVector(CVector amplitudes);
  StateVector(std::initializer_list<Complex> amplitudes);

  static StateVector basis(Index dim, Index i);

  Index dim() const { return amp_.size(); }
  const CVector& amplitudes() const { return amp_; }
  CVector& amplitudes() { return amp_; }

  Complex operator[](Index i) const { return amp_(i); }
  Complex& operator[](Index i) { return amp_(i); }

  double squared_norm() const { return amp_.squaredNorm(); }
  double norm() const { return amp_.norm(); }
  bool is_normalized(double tol = 1e-10) const;

  /// Throws std::domain_error for a zero vector.
  StateVector normalized() const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator-=(const StateVector& other);
  StateVector& operator*=(Complex s);

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(Complex s, StateVector a) { return a *= s; }
  friend bool operator==(const StateVector& a, const StateVector& b);

 private:
  CVector amp_;
};

/// Square complex matrix acting on StateVector (Hamiltonians, jump operators, observables).
class LinearOperator {
 public:
  LinearOperator() = default;
  explicit LinearOperator(Index dim);
  explicit LinearOperator(CMatrix entries);

  static LinearOperator identity(Index dim);
  static LinearOperator zero(Index dim) { return LinearOperator(dim); }

  Index dim() const { return m_.rows(); }
  const CMatrix& entries() const { return m_; }
  CMatrix& entries() { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }
  Complex& operator()(Index r, Index c) { return m_(r, c); }

  LinearOperator adjoint() const { return LinearOperator(CMatrix(m_.adjoint())); }
  double hermitian_deviation() const;
  bool is_hermitian(double tol = 1e-12) const { return hermitian_deviation() < tol; }

  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(Complex s, const LinearOperator& a);
  friend bool operator==(const LinearOperator& a, const LinearOperator& b) { return a.m_ == b.m_; }

 private:
  CMatrix m_;
};

/// Density operator. Hermiticity and unit trace are expected of physical
/// states but not enforced: quasi-probability reconstructions may have
/// negative eigenvalues.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Index dim);
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix pure(const StateVector& psi);

  Index dim() const { return m_.rows(); }
  const CMatrix& entries() const { return m_; }
  CMatrix& entries() { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }
  Complex& operator()(Index r, Index c) { return m_(r, c); }

  Complex trace() const { return m_.trace(); }
  double hermitian_deviation() const;
  double purity() const;

 private:
  CMatrix m_;
};

/// <a|b>, conjugate-linear in a.
Complex inner(const StateVector& a, const StateVector& b);

/// M|psi>, not renormalized.
StateVector apply(const LinearOperator& m, const StateVector& psi);

/// |a><b|
LinearOperator outer(const StateVector& a, const StateVector& b);

/// <psi|A|psi> for a normalized psi.
Complex expectation(const LinearOperator& a, const StateVector& psi);

/// Smallest eigenvalue of a Hermitian matrix. Throws NotHermitian when the
/// entrywise deviation from Hermiticity exceeds tol.
double min_eigenvalue(const DensityMatrix& rho, double tol = 1e-10);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace nmqj
