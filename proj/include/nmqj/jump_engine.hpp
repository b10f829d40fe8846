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
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nmqj/linalg.hpp"
#include "nmqj/model.hpp"
#include "nmqj/parallel.hpp"

namespace nmqj {

inline constexpr double kDefaultRayTolerance = 1e-10;
inline constexpr double kDefaultMaxJumpProbability = 0.1;
inline constexpr std::size_t kNoRay = std::numeric_limits<std::size_t>::max();

/// Projective ray with its canonical-phase representative.
struct Ray {
  StateVector representative;
  std::size_t index = 0;
};

/// Rotates the global phase so the largest-magnitude amplitude (lowest index
/// on ties) is real and positive. Does not renormalize.
StateVector canonical_phase(const StateVector& psi);

/// 1 - |<a|b>|^2 < tol, for normalized a and b.
bool ray_equivalent(const StateVector& a, const StateVector& b, double tol = kDefaultRayTolerance);

/// Distinct rays with integer occupation counts summing to `total`.
class EffectiveEnsemble {
 public:
  EffectiveEnsemble() = default;
  EffectiveEnsemble(const StateVector& psi, std::int64_t n);

  std::size_t size() const { return reps_.size(); }
  std::int64_t total() const { return total_; }
  const StateVector& representative(std::size_t i) const { return reps_[i]; }
  std::int64_t count(std::size_t i) const { return counts_[i]; }
  const std::vector<StateVector>& representatives() const { return reps_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  Ray ray(std::size_t i) const { return {reps_[i], i}; }

  /// Index of the ray equivalent to psi, or kNoRay.
  std::size_t find(const StateVector& psi, double tol = kDefaultRayTolerance) const;

  /// Appends a ray (canonicalized) with the given count; total grows by count.
  std::size_t add_ray(const StateVector& psi, std::int64_t count = 0);

  /// Replaces representatives in place (after deterministic drift).
  void set_representative(std::size_t i, StateVector psi) { reps_[i] = std::move(psi); }

  void transfer(std::size_t source, std::size_t target, std::int64_t n);

  /// Merges rays that are equivalent within tol. The survivor is the member
  /// with the larger count (lower index on ties); counts are summed.
  /// Returns the number of rays removed.
  std::size_t merge_equivalent(double tol = kDefaultRayTolerance);

  /// Throws std::logic_error if counts are negative or do not sum to total.
  void check_invariants() const;

 private:
  std::vector<StateVector> reps_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Conflict with Bayes' theorem: a ray with zero occupation would have to
/// supply a positive reverse-jump flux. Terminates an NMQJ run.
class PositivityBreakdown : public std::runtime_error {
 public:
  PositivityBreakdown(std::size_t source_ray, std::size_t target_ray, std::size_t channel, std::string channel_label,
                      double t, double reverse_flux);

  std::size_t source_ray;  ///< kNoRay when the source ray is not in the ensemble at all
  std::size_t target_ray;
  std::size_t channel;
  std::string channel_label;
  double t;
  double reverse_flux;  ///< dt * Delta^- * N_target * ||C phi||^2
  std::int64_t step = -1;  ///< filled in by the runner
};

class TimestepTooLarge : public std::runtime_error {
 public:
  TimestepTooLarge(std::size_t ray, double total_probability, double limit, double dt);

  std::size_t ray;
  double total_probability;
  double limit;
  double dt;
  double suggested_dt;
  std::int64_t step = -1;
};

enum class JumpDirection { forward, reverse };

struct JumpProposal {
  std::size_t source_ray = 0;
  std::size_t target_ray = 0;  ///< may index ProposalSet::new_rays (offset by the ensemble size)
  std::size_t channel = 0;
  JumpDirection direction = JumpDirection::forward;
  double probability = 0.0;
};

struct ProposalSet {
  /// per_ray[i] holds the proposals whose source is ray i.
  std::vector<std::vector<JumpProposal>> per_ray;
  /// Forward targets not yet in the ensemble, in creation order. Ray index of
  /// new_rays[m] is ensemble.size() + m.
  std::vector<StateVector> new_rays;
};

struct JumpOptions {
  double ray_tolerance = kDefaultRayTolerance;
  double max_jump_probability = kDefaultMaxJumpProbability;
  Execution execution = Execution::serial;
};

/// dt * Delta^+(t) * ||C psi||^2
double forward_jump_probability(const StateVector& psi, const Channel& ch, double t, double dt);

/// C psi / ||C psi|| with canonical phase. Throws std::logic_error when C psi = 0.
StateVector forward_jump_target(const StateVector& psi, const Channel& ch);

/// dt * Delta^-(t) * (N_target / N_source) * ||C phi_target||^2 for a source
/// ray equivalent to C phi_target. Throws PositivityBreakdown when
/// N_source = 0 while the reverse flux is positive, std::invalid_argument when
/// the rays are not connected by the channel.
double reverse_jump_probability(const Ray& source, const Ray& target, const Channel& ch, std::size_t channel_index,
                                const EffectiveEnsemble& ens, double t, double dt,
                                double tol = kDefaultRayTolerance);

ProposalSet enumerate_proposals(const EffectiveEnsemble& ens, const ModelSpec& model, double t, double dt,
                                const JumpOptions& opts = {});

/// 1 - sum of probabilities. Throws TimestepTooLarge when negative.
double no_jump_probability(std::span<const JumpProposal> proposals);

struct Transfer {
  std::size_t source_ray = 0;
  std::size_t target_ray = 0;
  std::size_t channel = 0;
  JumpDirection direction = JumpDirection::forward;
  std::int64_t count = 0;
};

/// Draws, for each ray, a multinomial over {proposals..., no jump} with N_i
/// trials; proposal l of ray i uses the substream (step, i, l). Requires new
/// rays from the proposal set to be appended to ens already.
std::vector<Transfer> sample_transitions(const EffectiveEnsemble& ens, const ProposalSet& proposals,
                                         std::uint64_t seed, std::uint64_t step,
                                         Execution exec = Execution::serial);

void apply_transfers(EffectiveEnsemble& ens, std::span<const Transfer> transfers);

/// Joint probabilities of psi -> phi at +|Delta| and of phi -> psi at -|Delta|,
/// where phi ~ C psi and Delta = ch.rate(t). Joint = (N_source / N) * conditional.
std::pair<double, double> duality_check(const Ray& psi, const Ray& phi, const Channel& ch,
                                        const EffectiveEnsemble& ens, double t, double dt,
                                        double tol = kDefaultRayTolerance);

}  // namespace nmqj
