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


#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nmqj/linalg.hpp"
#include "nmqj/model.hpp"
#include "nmqj/rate.hpp"

using namespace nmqj;

namespace {

const StateVector g = StateVector::basis(2, 0);
const StateVector e = StateVector::basis(2, 1);
const double r2 = 1.0 / std::sqrt(2.0);

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("inner product") {
  CHECK(inner(e, e) == Complex(1.0, 0.0));
  CHECK(inner(e, g) == Complex(0.0, 0.0));
  const StateVector plus{r2, r2};
  CHECK(std::abs(inner(plus, e) - r2) < 1e-15);
  // Conjugate-linear in the first slot.
  const StateVector a{Complex(0.0, 1.0), 0.0};
  CHECK(inner(a, g) == Complex(0.0, -1.0));
  CHECK_THROWS_AS(inner(e, StateVector::basis(3, 0)), DimensionMismatch);
}

TEST_CASE("apply") {
  CHECK(apply(sigma_minus(), e) == g);
  const StateVector psi{0.3, Complex(0.1, 0.9)};
  CHECK(apply(LinearOperator::identity(2), psi) == psi);
  CHECK(apply(sigma_minus(), g).squared_norm() == 0.0);
  CHECK_THROWS_AS(apply(LinearOperator::identity(3), e), DimensionMismatch);
}

TEST_CASE("outer") {
  CHECK(outer(e, e).entries() == diag2(0.0, 1.0));
  CHECK(outer(g, e) == sigma_minus());
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    StateVector psi{Complex(nd(gen), nd(gen)), Complex(nd(gen), nd(gen)), Complex(nd(gen), nd(gen))};
    psi = psi.normalized();
    const LinearOperator p = outer(psi, psi);
    CHECK(max_abs_diff((p * p).entries(), p.entries()) < 1e-14);
  }
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(DensityMatrix(diag2(0.5, 0.5))) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(min_eigenvalue(DensityMatrix(diag2(1.0, 0.0)))) < 1e-15);
  CHECK(min_eigenvalue(DensityMatrix(diag2(1.2, -0.2))) == doctest::Approx(-0.2).epsilon(1e-14));
  CMatrix bad = diag2(1.0, 0.0);
  bad(0, 1) = 0.3;
  CHECK_THROWS_AS(min_eigenvalue(DensityMatrix(bad)), NotHermitian);
  // Pure off-diagonal state: eigenvalues 0 and 1.
  const StateVector plus{r2, r2};
  CHECK(std::abs(min_eigenvalue(DensityMatrix::pure(plus))) < 1e-15);
}

TEST_CASE("state vector normalization") {
  CHECK(StateVector{0.6, 0.8}.is_normalized());
  CHECK_FALSE(StateVector{0.6, 0.9}.is_normalized());
  CHECK_THROWS_AS(StateVector(2).normalized(), std::domain_error);
  const StateVector n = StateVector{3.0, Complex(0.0, 4.0)}.normalized();
  CHECK(std::abs(n.norm() - 1.0) < 1e-15);
}

TEST_CASE("hermiticity checks") {
  CHECK(sigma_x().is_hermitian());
  CHECK(sigma_y().is_hermitian());
  CHECK_FALSE(sigma_minus().is_hermitian());
  CHECK(sigma_minus().adjoint() == sigma_plus());
  CHECK(DensityMatrix::pure(e).purity() == doctest::Approx(1.0));
}

TEST_CASE("rate partition") {
  const auto a = rate_partition(2.0);
  CHECK(a.plus == 2.0);
  CHECK(a.minus == 0.0);
  const auto b = rate_partition(-0.5);
  CHECK(b.plus == 0.0);
  CHECK(b.minus == 0.5);
  const auto c = rate_partition(0.0);
  CHECK(c.plus == 0.0);
  CHECK(c.minus == 0.0);
  for (double d : {-3.0, -1e-9, 0.0, 1e-9, 7.0}) {
    const auto p = rate_partition(d);
    CHECK(p.plus * p.minus == 0.0);
    CHECK(p.plus - p.minus == d);
  }
  CHECK_THROWS(rate_partition(NAN));
}

TEST_CASE("rate evaluation") {
  CHECK(eval_rate(RateFunction::constant(1.0), 5.0) == 1.0);
  CHECK(eval_rate(RateFunction::cosine(1.0, std::numbers::pi), 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  const RateFunction pw(RateKind::piecewise_constant, {0.0, 1.0, 1.0, -0.5});
  CHECK(eval_rate(pw, 1.5) == -0.5);
  CHECK(eval_rate(pw, 0.5) == 1.0);
  CHECK(eval_rate(pw, 1.0) == -0.5);
  CHECK_THROWS_AS(eval_rate(pw, -0.1), RateDomainError);

  const RateFunction dc = RateFunction::damped_cosine(2.0, 0.5, 3.0);
  CHECK(dc(0.7) == doctest::Approx(2.0 * std::exp(-0.35) * std::cos(2.1)));
  CHECK(RateFunction::cosine(1.0, 2.0, 0.25)(0.4) == doctest::Approx(0.25 + std::cos(0.8)));

  const RateFunction tab(RateKind::table_lookup, {0.0, 1.0, 2.0, 3.0});
  CHECK(tab(1.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(tab(2.5), RateDomainError);

  CHECK(rate_kind_from_string(to_string(RateKind::damped_cosine)) == RateKind::damped_cosine);
  CHECK_THROWS(RateFunction(RateKind::constant, {}));
}
