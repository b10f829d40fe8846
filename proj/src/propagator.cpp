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

#include "nmqj/propagator.hpp"

#include <cmath>

namespace nmqj {

LinearOperator effective_hamiltonian(const ModelSpec& model, double t) {
  CMatrix h = model.hamiltonian.entries();
  for (const auto& ch : model.channels) {
    const CMatrix& c = ch.jump_operator.entries();
    h -= (0.5 * kI * ch.rate(t)) * (c.adjoint() * c);
  }
  return LinearOperator(std::move(h));
}

StateVector drift_rhs(const StateVector& psi, const ModelSpec& model, double t) {
  const CVector& v = psi.amplitudes();
  const double norm2 = v.squaredNorm();
  if (!(norm2 > 0.0)) {
    throw DegenerateStep("drift_rhs: zero state vector");
  }
  CVector out = -kI * (model.hamiltonian.entries() * v);
  double nonlinear = 0.0;
  for (const auto& ch : model.channels) {
    const double delta = ch.rate(t);
    if (delta == 0.0) continue;
    const CMatrix& c = ch.jump_operator.entries();
    const CVector cv = c * v;
    out.noalias() -= (0.5 * delta) * (c.adjoint() * cv);
    nonlinear += delta * cv.squaredNorm() / norm2;
  }
  out += (0.5 * nonlinear) * v;
  return StateVector(std::move(out));
}

StateVector drift_increment(const StateVector& psi, const ModelSpec& model, double t, double dt) {
  StateVector d = drift_rhs(psi, model, t);
  d *= dt;
  return d;
}

StateVector propagate(const StateVector& psi, const ModelSpec& model, double t, const PropagatorConfig& cfg) {
  if (!(cfg.dt > 0.0)) {
    throw std::invalid_argument("propagate: dt must be positive");
  }
  const double dt = cfg.dt;
  CVector next;
  if (cfg.method == PropagatorMethod::first_order) {
    next = psi.amplitudes() + dt * drift_rhs(psi, model, t).amplitudes();
  } else {
    const CVector& y = psi.amplitudes();
    const CVector k1 = drift_rhs(psi, model, t).amplitudes();
    const CVector k2 = drift_rhs(StateVector(CVector(y + 0.5 * dt * k1)), model, t + 0.5 * dt).amplitudes();
    const CVector k3 = drift_rhs(StateVector(CVector(y + 0.5 * dt * k2)), model, t + 0.5 * dt).amplitudes();
    const CVector k4 = drift_rhs(StateVector(CVector(y + dt * k3)), model, t + dt).amplitudes();
    next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const double n = next.norm();
  if (!(n > 1e-150) || !std::isfinite(n)) {
    throw DegenerateStep("propagate: state norm vanished or diverged; dt is far too large for this model");
  }
  if (cfg.renormalize_each_step) {
    next /= n;
  }
  return StateVector(std::move(next));
}

DensityMatrix pure_density_increment(const StateVector& psi, const ModelSpec& model, double t, double dt) {
  const CMatrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  const CMatrix& h = model.hamiltonian.entries();
  CMatrix d = -kI * (h * rho - rho * h);
  double nonlinear = 0.0;
  for (const auto& ch : model.channels) {
    const double delta = ch.rate(t);
    if (delta == 0.0) continue;
    const CMatrix& c = ch.jump_operator.entries();
    const CMatrix cdc = c.adjoint() * c;
    d -= (0.5 * delta) * (cdc * rho + rho * cdc);
    nonlinear += delta * (c * psi.amplitudes()).squaredNorm();
  }
  d += nonlinear * rho;
  return DensityMatrix(CMatrix(dt * d));
}

}  // namespace nmqj
