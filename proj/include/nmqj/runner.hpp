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
#include <optional>
#include <string>
#include <vector>

#include "nmqj/jump_engine.hpp"
#include "nmqj/model.hpp"
#include "nmqj/propagator.hpp"

namespace nmqj {

struct RunConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  std::int64_t ensemble_size = 1000;
  std::uint64_t seed = 0;
  std::int64_t record_stride = 1;
  double ray_tolerance = kDefaultRayTolerance;
  double max_jump_probability = kDefaultMaxJumpProbability;
  PropagatorMethod method = PropagatorMethod::rk4;
  Execution execution = Execution::serial;
  bool record_jump_log = true;

  /// Throws std::invalid_argument on dt <= 0, t_final < 0, N < 1, stride < 1.
  void validate() const;
  std::int64_t steps() const;
};

struct EnsembleSnapshot {
  std::int64_t step = 0;
  double t = 0.0;
  std::vector<StateVector> rays;
  std::vector<std::int64_t> counts;
  DensityMatrix density;
  double min_eigenvalue = 0.0;
};

/// Per step and channel: the rate used and the proposals/jumps it produced.
struct JumpLogEntry {
  std::int64_t step = 0;
  double t = 0.0;  ///< time at which the rates were evaluated
  std::size_t channel = 0;
  double rate = 0.0;
  std::int64_t forward_proposals = 0;
  std::int64_t reverse_proposals = 0;
  std::int64_t forward_jumps = 0;
  std::int64_t reverse_jumps = 0;
};

enum class RunStatus { completed, positivity_breakdown, timestep_too_large };

struct BreakdownRecord {
  std::int64_t step = 0;
  double t = 0.0;
  std::size_t source_ray = kNoRay;
  std::size_t target_ray = 0;
  std::optional<StateVector> source_state;  ///< when the source ray is in the ensemble
  StateVector target_state;
  std::int64_t target_count = 0;
  std::size_t channel = 0;
  std::string channel_label;
  double reverse_flux = 0.0;
  std::string message;
};

struct TimestepRecord {
  std::int64_t step = 0;
  double t = 0.0;
  std::size_t ray = 0;
  double total_probability = 0.0;
  double limit = 0.0;
  double suggested_dt = 0.0;
  std::string message;
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  std::vector<EnsembleSnapshot> snapshots;
  std::vector<JumpLogEntry> jump_log;
  std::optional<BreakdownRecord> breakdown;
  std::optional<TimestepRecord> timestep;
  std::int64_t steps_completed = 0;
  std::size_t max_rays = 0;
};

/// (1/N) sum_j N_j |phi_j><phi_j|
DensityMatrix ensemble_density(const EffectiveEnsemble& ens);

/// (1/N) sum_j N_j <phi_j|A|phi_j>; throws NotHermitian for non-Hermitian A.
double observable_average(const EffectiveEnsemble& ens, const LinearOperator& a);

/// Advances the ensemble by one step: drift, re-canonicalize, merge, jump.
/// Jump rates are evaluated at the step midpoint. Throws PositivityBreakdown
/// or TimestepTooLarge (with step set) and leaves the ensemble drifted but
/// without jumps applied in that case.
void nmqj_step(EffectiveEnsemble& ens, const ModelSpec& model, std::int64_t step, const RunConfig& cfg,
               std::vector<JumpLogEntry>* log = nullptr);

/// Full NMQJ simulation from {initial_state: N}. On breakdown or an oversized
/// step the result holds every snapshot recorded so far plus the error record.
RunResult run(const ModelSpec& model, const RunConfig& cfg);

}  // namespace nmqj
