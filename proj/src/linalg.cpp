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

#include "nmqj/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nmqj {

namespace {

void require_dim(const char* where, Index expected, Index got) {
  if (expected != got) {
    throw DimensionMismatch(where, expected, got);
  }
}

double hermitian_deviation_of(const CMatrix& m) {
  if (m.rows() == 0) {
    return 0.0;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

DimensionMismatch::DimensionMismatch(const std::string& where, Index expected, Index got)
    : std::invalid_argument(where + ": dimension mismatch (expected " + std::to_string(expected) +
                            ", got " + std::to_string(got) + ")") {}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Index dim) : amp_(CVector::Zero(dim)) {
  if (dim <= 0) {
    throw std::invalid_argument("StateVector: dimension must be positive");
  }
}

StateVector::StateVector(CVector amplitudes) : amp_(std::move(amplitudes)) {}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : amp_(static_cast<Index>(amplitudes.size())) {
  Index i = 0;
  for (const auto& a : amplitudes) {
    amp_(i++) = a;
  }
}

StateVector StateVector::basis(Index dim, Index i) {
  if (i < 0 || i >= dim) {
    throw std::out_of_range("StateVector::basis: index out of range");
  }
  StateVector v(dim);
  v.amp_(i) = 1.0;
  return v;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) < tol; }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::domain_error("StateVector::normalized: vector has zero or non-finite norm");
  }
  return StateVector(CVector(amp_ / n));
}

StateVector& StateVector::operator+=(const StateVector& other) {
  require_dim("StateVector::operator+=", dim(), other.dim());
  amp_ += other.amp_;
  return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
  require_dim("StateVector::operator-=", dim(), other.dim());
  amp_ -= other.amp_;
  return *this;
}

StateVector& StateVector::operator*=(Complex s) {
  amp_ *= s;
  return *this;
}

bool operator==(const StateVector& a, const StateVector& b) {
  return a.dim() == b.dim() && a.amp_ == b.amp_;
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(Index dim) : m_(CMatrix::Zero(dim, dim)) {
  if (dim <= 0) {
    throw std::invalid_argument("LinearOperator: dimension must be positive");
  }
}

LinearOperator::LinearOperator(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionMismatch("LinearOperator: matrix must be square", m_.rows(), m_.cols());
  }
}

LinearOperator LinearOperator::identity(Index dim) {
  return LinearOperator(CMatrix(CMatrix::Identity(dim, dim)));
}

double LinearOperator::hermitian_deviation() const { return hermitian_deviation_of(m_); }

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  require_dim("LinearOperator::operator*", a.dim(), b.dim());
  return LinearOperator(CMatrix(a.m_ * b.m_));
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  require_dim("LinearOperator::operator+", a.dim(), b.dim());
  return LinearOperator(CMatrix(a.m_ + b.m_));
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  require_dim("LinearOperator::operator-", a.dim(), b.dim());
  return LinearOperator(CMatrix(a.m_ - b.m_));
}

LinearOperator operator*(Complex s, const LinearOperator& a) { return LinearOperator(CMatrix(s * a.m_)); }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Index dim) : m_(CMatrix::Zero(dim, dim)) {
  if (dim <= 0) {
    throw std::invalid_argument("DensityMatrix: dimension must be positive");
  }
}

DensityMatrix::DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionMismatch("DensityMatrix: matrix must be square", m_.rows(), m_.cols());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(CMatrix(psi.amplitudes() * psi.amplitudes().adjoint()));
}

double DensityMatrix::hermitian_deviation() const { return hermitian_deviation_of(m_); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// ---------------------------------------------------------------------------
// Free functions

Complex inner(const StateVector& a, const StateVector& b) {
  require_dim("inner", a.dim(), b.dim());
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

StateVector apply(const LinearOperator& m, const StateVector& psi) {
  require_dim("apply", m.dim(), psi.dim());
  return StateVector(CVector(m.entries() * psi.amplitudes()));
}

LinearOperator outer(const StateVector& a, const StateVector& b) {
  require_dim("outer", a.dim(), b.dim());
  return LinearOperator(CMatrix(a.amplitudes() * b.amplitudes().adjoint()));
}

Complex expectation(const LinearOperator& a, const StateVector& psi) {
  require_dim("expectation", a.dim(), psi.dim());
  return psi.amplitudes().dot(a.entries() * psi.amplitudes());
}

double min_eigenvalue(const DensityMatrix& rho, double tol) {
  const double dev = rho.hermitian_deviation();
  if (!(dev <= tol)) {
    throw NotHermitian("min_eigenvalue: input deviates from Hermitian by " + std::to_string(dev));
  }
  // Symmetrize away the residual so the solver sees an exactly Hermitian input.
  const CMatrix h = 0.5 * (rho.entries() + rho.entries().adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("min_eigenvalue: eigenvalue iteration did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff", a.rows(), b.rows());
  }
  if (a.size() == 0) {
    return 0.0;
  }
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nmqj
