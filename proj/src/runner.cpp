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

#include "nmqj/runner.hpp"

#include <cmath>
#include <stdexcept>

namespace nmqj {

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("RunConfig: dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("RunConfig: t_final must be >= 0");
  if (ensemble_size < 1) throw std::invalid_argument("RunConfig: ensemble size must be >= 1");
  if (record_stride < 1) throw std::invalid_argument("RunConfig: record stride must be >= 1");
  if (!(ray_tolerance > 0.0 && ray_tolerance < 1.0)) {
    throw std::invalid_argument("RunConfig: ray tolerance must lie in (0, 1)");
  }
  if (!(max_jump_probability > 0.0 && max_jump_probability <= 1.0)) {
    throw std::invalid_argument("RunConfig: max jump probability must lie in (0, 1]");
  }
}

std::int64_t RunConfig::steps() const { return static_cast<std::int64_t>(std::llround(t_final / dt)); }

DensityMatrix ensemble_density(const EffectiveEnsemble& ens) {
  if (ens.size() == 0) throw std::invalid_argument("ensemble_density: empty ensemble");
  const Index d = ens.representative(0).dim();
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < ens.size(); ++j) {
    if (ens.count(j) == 0) continue;
    const CVector& v = ens.representative(j).amplitudes();
    rho.noalias() += static_cast<double>(ens.count(j)) * (v * v.adjoint());
  }
  rho /= static_cast<double>(ens.total());
  return DensityMatrix(std::move(rho));
}

double observable_average(const EffectiveEnsemble& ens, const LinearOperator& a) {
  if (!a.is_hermitian(1e-12)) throw NotHermitian("observable_average: observable is not Hermitian");
  double sum = 0.0;
  for (std::size_t j = 0; j < ens.size(); ++j) {
    if (ens.count(j) == 0) continue;
    sum += static_cast<double>(ens.count(j)) * expectation(a, ens.representative(j)).real();
  }
  return sum / static_cast<double>(ens.total());
}

void nmqj_step(EffectiveEnsemble& ens, const ModelSpec& model, std::int64_t step, const RunConfig& cfg,
               std::vector<JumpLogEntry>* log) {
  const double t = static_cast<double>(step) * cfg.dt;
  const PropagatorConfig prop{cfg.dt, true, cfg.method};

  // (1)+(2) deterministic drift of every representative, including empty rays.
  std::vector<StateVector> drifted(ens.size());
  for_each_index(ens.size(), cfg.execution, [&](std::size_t i) {
    drifted[i] = canonical_phase(propagate(ens.representative(i), model, t, prop));
  });
  for (std::size_t i = 0; i < ens.size(); ++i) ens.set_representative(i, std::move(drifted[i]));

  // (3)
  ens.merge_equivalent(cfg.ray_tolerance);

  // (4) jumps over [t, t + dt), rates at the midpoint.
  const double t_jump = t + 0.5 * cfg.dt;
  const JumpOptions opts{cfg.ray_tolerance, cfg.max_jump_probability, cfg.execution};
  ProposalSet proposals;
  try {
    proposals = enumerate_proposals(ens, model, t_jump, cfg.dt, opts);
  } catch (PositivityBreakdown& e) {
    e.step = step + 1;
    throw;
  } catch (TimestepTooLarge& e) {
    e.step = step + 1;
    throw;
  }
  for (const auto& psi : proposals.new_rays) ens.add_ray(psi, 0);

  // (5)
  const auto transfers =
      sample_transitions(ens, proposals, cfg.seed, static_cast<std::uint64_t>(step), cfg.execution);
  apply_transfers(ens, transfers);
  ens.check_invariants();

  if (log != nullptr) {
    const std::size_t n_ch = model.channels.size();
    std::vector<JumpLogEntry> entries(n_ch);
    for (std::size_t k = 0; k < n_ch; ++k) {
      entries[k].step = step + 1;
      entries[k].t = t_jump;
      entries[k].channel = k;
      entries[k].rate = model.channels[k].rate(t_jump);
    }
    for (const auto& per_ray : proposals.per_ray) {
      for (const auto& p : per_ray) {
        auto& e = entries[p.channel];
        (p.direction == JumpDirection::forward ? e.forward_proposals : e.reverse_proposals) += 1;
      }
    }
    for (const auto& tr : transfers) {
      auto& e = entries[tr.channel];
      (tr.direction == JumpDirection::forward ? e.forward_jumps : e.reverse_jumps) += tr.count;
    }
    log->insert(log->end(), entries.begin(), entries.end());
  }
}

namespace {

EnsembleSnapshot snapshot(const EffectiveEnsemble& ens, std::int64_t step, double t) {
  EnsembleSnapshot s;
  s.step = step;
  s.t = t;
  s.rays = ens.representatives();
  s.counts = ens.counts();
  s.density = ensemble_density(ens);
  s.min_eigenvalue = min_eigenvalue(s.density, 1e-9);
  return s;
}

}  // namespace

RunResult run(const ModelSpec& model, const RunConfig& cfg) {
  model.validate();
  cfg.validate();

  RunResult result;
  EffectiveEnsemble ens(model.initial_state, cfg.ensemble_size);
  const std::int64_t n_steps = cfg.steps();
  result.snapshots.push_back(snapshot(ens, 0, 0.0));
  result.max_rays = ens.size();

  for (std::int64_t step = 0; step < n_steps; ++step) {
    try {
      nmqj_step(ens, model, step, cfg, cfg.record_jump_log ? &result.jump_log : nullptr);
    } catch (const PositivityBreakdown& e) {
      BreakdownRecord rec;
      rec.step = e.step;
      rec.t = e.t;
      rec.source_ray = e.source_ray;
      rec.target_ray = e.target_ray;
      if (e.source_ray != kNoRay) rec.source_state = ens.representative(e.source_ray);
      rec.target_state = ens.representative(e.target_ray);
      rec.target_count = ens.count(e.target_ray);
      rec.channel = e.channel;
      rec.channel_label = e.channel_label;
      rec.reverse_flux = e.reverse_flux;
      rec.message = e.what();
      result.status = RunStatus::positivity_breakdown;
      result.breakdown = std::move(rec);
      return result;
    } catch (const TimestepTooLarge& e) {
      result.status = RunStatus::timestep_too_large;
      result.timestep = TimestepRecord{e.step, static_cast<double>(step) * cfg.dt, e.ray, e.total_probability,
                                       e.limit, e.suggested_dt, e.what()};
      return result;
    }
    result.steps_completed = step + 1;
    result.max_rays = std::max(result.max_rays, ens.size());
    const std::int64_t done = step + 1;
    if (done % cfg.record_stride == 0 || done == n_steps) {
      result.snapshots.push_back(snapshot(ens, done, static_cast<double>(done) * cfg.dt));
    }
  }
  return result;
}

}  // namespace nmqj
