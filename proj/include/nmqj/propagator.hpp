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

#include <stdexcept>

#include "nmqj/linalg.hpp"
#include "nmqj/model.hpp"

namespace nmqj {

enum class PropagatorMethod {
  first_order,  ///< literal psi + delta_psi
  rk4,          ///< classic RK4 on the norm-preserving nonlinear ODE
};

struct PropagatorConfig {
  double dt = 1e-3;
  bool renormalize_each_step = true;
  PropagatorMethod method = PropagatorMethod::rk4;
};

/// U' psi collapsed to (numerically) zero norm.
class DegenerateStep : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// H - (i/2) sum_k Delta_k(t) C_k^+ C_k with the signed rates.
LinearOperator effective_hamiltonian(const ModelSpec& model, double t);

/// Drift direction (-i H_eff + 1/2 sum_k Delta_k ||C_k psi||^2) psi, where the
/// norms are taken on psi / ||psi||. This is the right-hand side of the
/// norm-preserving deterministic ODE.
StateVector drift_rhs(const StateVector& psi, const ModelSpec& model, double t);

/// First-order increment delta_psi = dt * drift_rhs(psi, t). The caller forms psi + delta_psi.
StateVector drift_increment(const StateVector& psi, const ModelSpec& model, double t, double dt);

/// One deterministic step t -> t + cfg.dt.
StateVector propagate(const StateVector& psi, const ModelSpec& model, double t, const PropagatorConfig& cfg);

/// delta rho_psi = dt ( -i[H, rho_psi] - 1/2 sum_k Delta_k {C_k^+ C_k, rho_psi}
///                      + rho_psi sum_k Delta_k ||C_k psi||^2 ).
DensityMatrix pure_density_increment(const StateVector& psi, const ModelSpec& model, double t, double dt);

}  // namespace nmqj
