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

#include "nmqj/jump_engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nmqj/rate.hpp"
#include "nmqj/rng.hpp"

namespace nmqj {

namespace {

// Images with squared norm at or below this are treated as annihilated.
constexpr double kImageFloor = 1e-200;

std::string breakdown_message(std::size_t source, std::size_t target, const std::string& label, double t,
                              double flux) {
  std::ostringstream os;
  os << "positivity breakdown at t=" << t << ": channel '" << label << "' requires reverse flux " << flux
     << " out of ";
  if (source == kNoRay) {
    os << "a ray absent from the ensemble";
  } else {
    os << "ray " << source << " which has zero occupation";
  }
  os << " (target ray " << target << ")";
  return os.str();
}

std::string timestep_message(std::size_t ray, double p, double limit, double dt) {
  std::ostringstream os;
  os << "timestep too large: total jump probability " << p << " of ray " << ray << " exceeds " << limit;
  if (std::isfinite(dt)) {
    os << "; suggested dt <= " << dt * limit / p;
  }
  return os.str();
}

struct Image {
  StateVector state;  // canonical, normalized
  double norm2 = 0.0;
};

}  // namespace

// ---------------------------------------------------------------------------
// Rays

StateVector canonical_phase(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  Index best = 0;
  double best_mag = -1.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double m = std::abs(a(i));
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (!(best_mag > 0.0)) {
    return psi;
  }
  const Complex rot = std::conj(a(best)) / best_mag;
  CVector out = a * rot;
  out(best) = best_mag;
  return StateVector(std::move(out));
}

bool ray_equivalent(const StateVector& a, const StateVector& b, double tol) {
  return 1.0 - std::norm(inner(a, b)) < tol;
}

EffectiveEnsemble::EffectiveEnsemble(const StateVector& psi, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("EffectiveEnsemble: size must be positive");
  add_ray(psi, n);
}

std::size_t EffectiveEnsemble::find(const StateVector& psi, double tol) const {
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    if (ray_equivalent(reps_[i], psi, tol)) return i;
  }
  return kNoRay;
}

std::size_t EffectiveEnsemble::add_ray(const StateVector& psi, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("EffectiveEnsemble::add_ray: negative count");
  if (!reps_.empty() && psi.dim() != reps_.front().dim()) {
    throw DimensionMismatch("EffectiveEnsemble::add_ray", reps_.front().dim(), psi.dim());
  }
  reps_.push_back(canonical_phase(psi));
  counts_.push_back(count);
  total_ += count;
  return reps_.size() - 1;
}

void EffectiveEnsemble::transfer(std::size_t source, std::size_t target, std::int64_t n) {
  if (n < 0 || n > counts_.at(source)) {
    throw std::logic_error("EffectiveEnsemble::transfer: count exceeds source occupation");
  }
  counts_[source] -= n;
  counts_.at(target) += n;
}

std::size_t EffectiveEnsemble::merge_equivalent(double tol) {
  std::size_t removed = 0;
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    for (std::size_t j = i + 1; j < reps_.size();) {
      if (ray_equivalent(reps_[i], reps_[j], tol)) {
        if (counts_[j] > counts_[i]) reps_[i] = std::move(reps_[j]);
        counts_[i] += counts_[j];
        reps_.erase(reps_.begin() + static_cast<std::ptrdiff_t>(j));
        counts_.erase(counts_.begin() + static_cast<std::ptrdiff_t>(j));
        ++removed;
      } else {
        ++j;
      }
    }
  }
  return removed;
}

void EffectiveEnsemble::check_invariants() const {
  std::int64_t sum = 0;
  for (auto c : counts_) {
    if (c < 0) throw std::logic_error("EffectiveEnsemble: negative occupation count");
    sum += c;
  }
  if (sum != total_) {
    throw std::logic_error("EffectiveEnsemble: counts sum to " + std::to_string(sum) + ", expected " +
                           std::to_string(total_));
  }
}

// ---------------------------------------------------------------------------
// Errors

PositivityBreakdown::PositivityBreakdown(std::size_t source, std::size_t target, std::size_t ch, std::string label,
                                         double time, double flux)
    : std::runtime_error(breakdown_message(source, target, label, time, flux)),
      source_ray(source),
      target_ray(target),
      channel(ch),
      channel_label(std::move(label)),
      t(time),
      reverse_flux(flux) {}

TimestepTooLarge::TimestepTooLarge(std::size_t r, double p, double lim, double step_dt)
    : std::runtime_error(timestep_message(r, p, lim, step_dt)),
      ray(r),
      total_probability(p),
      limit(lim),
      dt(step_dt),
      suggested_dt(std::isfinite(step_dt) && p > 0.0 ? step_dt * lim / p : std::nan("")) {}

// ---------------------------------------------------------------------------
// Probabilities

double forward_jump_probability(const StateVector& psi, const Channel& ch, double t, double dt) {
  const RatePartition part = rate_partition(ch.rate(t));
  if (part.plus == 0.0) return 0.0;
  return dt * part.plus * apply(ch.jump_operator, psi).squared_norm();
}

StateVector forward_jump_target(const StateVector& psi, const Channel& ch) {
  const StateVector image = apply(ch.jump_operator, psi);
  if (!(image.squared_norm() > kImageFloor)) {
    throw std::logic_error("forward_jump_target: channel '" + ch.label + "' annihilates the state");
  }
  return canonical_phase(image.normalized());
}

double reverse_jump_probability(const Ray& source, const Ray& target, const Channel& ch, std::size_t channel_index,
                                const EffectiveEnsemble& ens, double t, double dt, double tol) {
  const RatePartition part = rate_partition(ch.rate(t));
  const StateVector image = apply(ch.jump_operator, target.representative);
  const double norm2 = image.squared_norm();
  if (!(norm2 > kImageFloor) || !ray_equivalent(source.representative, image.normalized(), tol)) {
    throw std::invalid_argument("reverse_jump_probability: source ray is not the channel image of the target ray");
  }
  if (part.minus == 0.0) return 0.0;
  const auto n_source = ens.count(source.index);
  const auto n_target = ens.count(target.index);
  const double flux = dt * part.minus * static_cast<double>(n_target) * norm2;
  if (n_source == 0) {
    if (flux > 0.0) throw PositivityBreakdown(source.index, target.index, channel_index, ch.label, t, flux);
    return 0.0;
  }
  return dt * part.minus * (static_cast<double>(n_target) / static_cast<double>(n_source)) * norm2;
}

double no_jump_probability(std::span<const JumpProposal> proposals) {
  double sum = 0.0;
  for (const auto& p : proposals) sum += p.probability;
  const double rest = 1.0 - sum;
  if (rest < 0.0) {
    throw TimestepTooLarge(proposals.empty() ? 0 : proposals.front().source_ray, sum, 1.0, std::nan(""));
  }
  return rest;
}

ProposalSet enumerate_proposals(const EffectiveEnsemble& ens, const ModelSpec& model, double t, double dt,
                                const JumpOptions& opts) {
  const std::size_t n_rays = ens.size();
  const std::size_t n_ch = model.channels.size();

  std::vector<double> rates(n_ch);
  for (std::size_t k = 0; k < n_ch; ++k) rates[k] = model.channels[k].rate(t);

  // Channel images of every populated ray; independent per ray.
  std::vector<std::vector<Image>> images(n_rays, std::vector<Image>(n_ch));
  for_each_index(n_rays, opts.execution, [&](std::size_t i) {
    if (ens.count(i) == 0) return;
    for (std::size_t k = 0; k < n_ch; ++k) {
      if (rates[k] == 0.0) continue;
      StateVector img = apply(model.channels[k].jump_operator, ens.representative(i));
      const double n2 = img.squared_norm();
      if (!(n2 > kImageFloor)) continue;
      images[i][k] = {canonical_phase(img.normalized()), n2};
    }
  });

  ProposalSet out;
  out.per_ray.resize(n_rays);

  auto match = [&](const StateVector& psi) -> std::size_t {
    if (auto i = ens.find(psi, opts.ray_tolerance); i != kNoRay) return i;
    for (std::size_t m = 0; m < out.new_rays.size(); ++m) {
      if (ray_equivalent(out.new_rays[m], psi, opts.ray_tolerance)) return n_rays + m;
    }
    return kNoRay;
  };

  for (std::size_t k = 0; k < n_ch; ++k) {
    const RatePartition part = rate_partition(rates[k]);
    if (part.plus > 0.0) {
      for (std::size_t i = 0; i < n_rays; ++i) {
        const Image& img = images[i][k];
        if (ens.count(i) == 0 || img.norm2 == 0.0) continue;
        std::size_t target = match(img.state);
        if (target == kNoRay) {
          out.new_rays.push_back(img.state);
          target = n_rays + out.new_rays.size() - 1;
        }
        out.per_ray[i].push_back({i, target, k, JumpDirection::forward, dt * part.plus * img.norm2});
      }
    } else if (part.minus > 0.0) {
      // Reverse jumps run toward populated rays phi_j whose image C_k phi_j is the source.
      for (std::size_t j = 0; j < n_rays; ++j) {
        const Image& img = images[j][k];
        if (ens.count(j) == 0 || img.norm2 == 0.0) continue;
        const std::size_t source = ens.find(img.state, opts.ray_tolerance);
        const double flux = dt * part.minus * static_cast<double>(ens.count(j)) * img.norm2;
        if (source == kNoRay || ens.count(source) == 0) {
          throw PositivityBreakdown(source, j, k, model.channels[k].label, t, flux);
        }
        const double p = dt * part.minus *
                         (static_cast<double>(ens.count(j)) / static_cast<double>(ens.count(source))) * img.norm2;
        out.per_ray[source].push_back({source, j, k, JumpDirection::reverse, p});
      }
    }
  }

  for (std::size_t i = 0; i < n_rays; ++i) {
    double total = 0.0;
    for (const auto& p : out.per_ray[i]) total += p.probability;
    if (total > opts.max_jump_probability) {
      throw TimestepTooLarge(i, total, opts.max_jump_probability, dt);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Transfer> sample_transitions(const EffectiveEnsemble& ens, const ProposalSet& proposals,
                                         std::uint64_t seed, std::uint64_t step, Execution exec) {
  const std::size_t n_rays = std::min(ens.size(), proposals.per_ray.size());
  std::vector<std::vector<Transfer>> per_ray(n_rays);

  for_each_index(n_rays, exec, [&](std::size_t i) {
    const auto& props = proposals.per_ray[i];
    std::int64_t remaining = ens.count(i);
    double remaining_prob = 1.0;
    for (std::size_t l = 0; l < props.size() && remaining > 0; ++l) {
      const double p = props[l].probability;
      if (p <= 0.0) {
        continue;
      }
      const double q = std::clamp(p / remaining_prob, 0.0, 1.0);
      remaining_prob -= p;
      CounterStream rng(seed, {step, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(l)});
      std::binomial_distribution<std::int64_t> draw(remaining, q);
      const std::int64_t n = draw(rng);
      if (n > 0) {
        per_ray[i].push_back({i, props[l].target_ray, props[l].channel, props[l].direction, n});
        remaining -= n;
      }
    }
  });

  std::vector<Transfer> out;
  for (auto& v : per_ray) out.insert(out.end(), v.begin(), v.end());
  return out;
}

void apply_transfers(EffectiveEnsemble& ens, std::span<const Transfer> transfers) {
  for (const auto& tr : transfers) ens.transfer(tr.source_ray, tr.target_ray, tr.count);
}

std::pair<double, double> duality_check(const Ray& psi, const Ray& phi, const Channel& ch,
                                        const EffectiveEnsemble& ens, double t, double dt, double tol) {
  const double delta = std::abs(ch.rate(t));
  const double n = static_cast<double>(ens.total());
  if (!(apply(ch.jump_operator, psi.representative).squared_norm() > kImageFloor)) {
    return {0.0, 0.0};
  }

  Channel plus{ch.jump_operator, RateFunction::constant(delta), ch.label};
  Channel minus{ch.jump_operator, RateFunction::constant(-delta), ch.label};

  const double forward = (static_cast<double>(ens.count(psi.index)) / n) *
                         forward_jump_probability(psi.representative, plus, t, dt);
  // Reverse process: source phi (the image ray), target psi.
  const double reverse_conditional = reverse_jump_probability(phi, psi, minus, 0, ens, t, dt, tol);
  const double reverse = (static_cast<double>(ens.count(phi.index)) / n) * reverse_conditional;
  return {forward, reverse};
}

}  // namespace nmqj
