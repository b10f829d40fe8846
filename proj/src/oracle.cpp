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

#include "nmqj/oracle.hpp"

#include <cmath>

namespace nmqj {

namespace {

constexpr double kImageFloor = 1e-200;

void record(DensityTrajectory& out, std::int64_t step, double t, const CMatrix& rho) {
  out.steps.push_back(step);
  out.times.push_back(t);
  out.states.emplace_back(rho);
}

CMatrix rhs(const CMatrix& rho, const ModelSpec& model, double t) {
  const CMatrix& h = model.hamiltonian.entries();
  CMatrix out = -kI * (h * rho - rho * h);
  for (const auto& ch : model.channels) {
    const double delta = ch.rate(t);
    if (delta == 0.0) continue;
    const CMatrix& c = ch.jump_operator.entries();
    const CMatrix cdc = c.adjoint() * c;
    out += delta * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
  }
  return out;
}

}  // namespace

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelSpec& model, double t) {
  if (rho.dim() != model.dim) throw DimensionMismatch("lindblad_rhs", model.dim, rho.dim());
  return DensityMatrix(rhs(rho.entries(), model, t));
}

DensityTrajectory integrate_rk4(const ModelSpec& model, const DensityMatrix& rho0, double dt, double t_final,
                                std::int64_t record_stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_rk4: dt must be positive");
  if (record_stride < 1) throw std::invalid_argument("integrate_rk4: record stride must be >= 1");
  if (rho0.dim() != model.dim) throw DimensionMismatch("integrate_rk4", model.dim, rho0.dim());

  const auto n_steps = static_cast<std::int64_t>(std::llround(t_final / dt));
  DensityTrajectory out;
  CMatrix rho = rho0.entries();
  record(out, 0, 0.0, rho);
  for (std::int64_t s = 0; s < n_steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const CMatrix k1 = rhs(rho, model, t);
    const CMatrix k2 = rhs(rho + 0.5 * dt * k1, model, t + 0.5 * dt);
    const CMatrix k3 = rhs(rho + 0.5 * dt * k2, model, t + 0.5 * dt);
    const CMatrix k4 = rhs(rho + dt * k3, model, t + dt);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const std::int64_t done = s + 1;
    if (done % record_stride == 0 || done == n_steps) {
      record(out, done, static_cast<double>(done) * dt, rho);
    }
  }
  return out;
}

double WeightedEnsemble::total_weight() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

WeightedEnsemble p_integrator_step(const WeightedEnsemble& wens, const ModelSpec& model, double t, double dt,
                                   const PIntegratorOptions& opts) {
  const std::size_t n_rays = wens.rays.size();
  const std::size_t n_ch = model.channels.size();
  std::vector<double> rates(n_ch);
  for (std::size_t k = 0; k < n_ch; ++k) rates[k] = model.channels[k].rate(t);

  struct Image {
    StateVector state;
    double norm2 = 0.0;
  };
  std::vector<std::vector<Image>> images(n_rays, std::vector<Image>(n_ch));
  for_each_index(n_rays, opts.execution, [&](std::size_t j) {
    for (std::size_t k = 0; k < n_ch; ++k) {
      if (rates[k] == 0.0) continue;
      StateVector img = apply(model.channels[k].jump_operator, wens.rays[j]);
      const double n2 = img.squared_norm();
      if (n2 > kImageFloor) images[j][k] = {canonical_phase(img.normalized()), n2};
    }
  });

  WeightedEnsemble next{wens.rays, wens.weights};
  std::vector<double> delta_w(n_rays, 0.0);

  auto target_of = [&](const StateVector& psi) {
    for (std::size_t i = 0; i < next.rays.size(); ++i) {
      if (ray_equivalent(next.rays[i], psi, opts.ray_tolerance)) return i;
    }
    next.rays.push_back(psi);
    next.weights.push_back(0.0);
    delta_w.push_back(0.0);
    return next.rays.size() - 1;
  };

  for (std::size_t j = 0; j < n_rays; ++j) {
    const double w = wens.weights[j];
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < n_ch; ++k) {
      const Image& img = images[j][k];
      if (img.norm2 == 0.0) continue;
      const double flow = dt * w * rates[k] * img.norm2;
      const std::size_t i = target_of(img.state);
      delta_w[i] += flow;
      delta_w[j] -= flow;
    }
  }
  if (next.rays.size() > opts.max_rays) {
    throw RayLimitExceeded("p_integrator_step: ray set exceeded " + std::to_string(opts.max_rays) +
                           " rays; the model is not effectively finite");
  }
  for (std::size_t i = 0; i < next.rays.size(); ++i) next.weights[i] += delta_w[i];

  const PropagatorConfig prop{dt, true, opts.method};
  for_each_index(next.rays.size(), opts.execution, [&](std::size_t i) {
    next.rays[i] = canonical_phase(propagate(next.rays[i], model, t, prop));
  });

  // Merge rays the drift has made equivalent; survivor is the heavier ray.
  for (std::size_t i = 0; i < next.rays.size(); ++i) {
    for (std::size_t j = i + 1; j < next.rays.size();) {
      if (ray_equivalent(next.rays[i], next.rays[j], opts.ray_tolerance)) {
        if (std::abs(next.weights[j]) > std::abs(next.weights[i])) next.rays[i] = std::move(next.rays[j]);
        next.weights[i] += next.weights[j];
        next.rays.erase(next.rays.begin() + static_cast<std::ptrdiff_t>(j));
        next.weights.erase(next.weights.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
  }
  return next;
}

DensityMatrix wens_density(const WeightedEnsemble& wens) {
  if (wens.rays.empty()) throw std::invalid_argument("wens_density: empty ensemble");
  const Index d = wens.rays.front().dim();
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < wens.rays.size(); ++j) {
    const CVector& v = wens.rays[j].amplitudes();
    rho.noalias() += wens.weights[j] * (v * v.adjoint());
  }
  return DensityMatrix(std::move(rho));
}

std::vector<WeightedSnapshot> run_p_integrator(const ModelSpec& model, double dt, double t_final,
                                               std::int64_t record_stride, const PIntegratorOptions& opts) {
  model.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("run_p_integrator: dt must be positive");
  if (record_stride < 1) throw std::invalid_argument("run_p_integrator: record stride must be >= 1");

  auto snap = [](const WeightedEnsemble& w, std::int64_t step, double t) {
    WeightedSnapshot s;
    s.step = step;
    s.t = t;
    s.ensemble = w;
    s.density = wens_density(w);
    s.min_eigenvalue = min_eigenvalue(s.density, 1e-9);
    return s;
  };

  WeightedEnsemble wens{{canonical_phase(model.initial_state)}, {1.0}};
  std::vector<WeightedSnapshot> out{snap(wens, 0, 0.0)};
  const auto n_steps = static_cast<std::int64_t>(std::llround(t_final / dt));
  for (std::int64_t s = 0; s < n_steps; ++s) {
    wens = p_integrator_step(wens, model, static_cast<double>(s) * dt, dt, opts);
    const std::int64_t done = s + 1;
    if (done % record_stride == 0 || done == n_steps) {
      out.push_back(snap(wens, done, static_cast<double>(done) * dt));
    }
  }
  return out;
}

}  // namespace nmqj
