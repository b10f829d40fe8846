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

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nmqj/jump_engine.hpp"
#include "nmqj/linalg.hpp"
#include "nmqj/model.hpp"
#include "nmqj/propagator.hpp"

namespace nmqj {

// ---------------------------------------------------------------------------
// Direct integration of the master equation.

/// -i[H, rho] + sum_k Delta_k(t) (C_k rho C_k^+ - 1/2 {C_k^+ C_k, rho})
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelSpec& model, double t);

struct DensityTrajectory {
  std::vector<std::int64_t> steps;
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Classic RK4 on rho, recording t = 0 and every record_stride steps (and the last step).
DensityTrajectory integrate_rk4(const ModelSpec& model, const DensityMatrix& rho0, double dt, double t_final,
                                std::int64_t record_stride = 1);

// ---------------------------------------------------------------------------
// Deterministic effective-ensemble integration with signed weights.

/// Rays with real (possibly negative) weights approximating P[phi_j].
struct WeightedEnsemble {
  std::vector<StateVector> rays;
  std::vector<double> weights;

  double total_weight() const;
};

class RayLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PIntegratorOptions {
  double ray_tolerance = kDefaultRayTolerance;
  std::size_t max_rays = 4096;
  PropagatorMethod method = PropagatorMethod::rk4;
  Execution execution = Execution::serial;
};

/// One step: the weight increment
///
///   dw_i = dt [ sum_{j,k: C_k phi_j ~ phi_i} w_j Delta_k ||C_k phi_j||^2 - w_i sum_k Delta_k ||C_k phi_i||^2 ]
///
/// is formed with the rates at t (explicit Euler), new image rays are
/// appended, then every ray drifts t -> t + dt and equivalent rays merge.
WeightedEnsemble p_integrator_step(const WeightedEnsemble& wens, const ModelSpec& model, double t, double dt,
                                   const PIntegratorOptions& opts = {});

/// sum_j w_j |phi_j><phi_j|
DensityMatrix wens_density(const WeightedEnsemble& wens);

struct WeightedSnapshot {
  std::int64_t step = 0;
  double t = 0.0;
  WeightedEnsemble ensemble;
  DensityMatrix density;
  double min_eigenvalue = 0.0;
};

std::vector<WeightedSnapshot> run_p_integrator(const ModelSpec& model, double dt, double t_final,
                                               std::int64_t record_stride = 1, const PIntegratorOptions& opts = {});

}  // namespace nmqj
