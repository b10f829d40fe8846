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

#include "nmqj/model.hpp"

namespace nmqj {

namespace {

LinearOperator two_level(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return LinearOperator(m);
}

ModelSpec decay_model(RateFunction rate, StateVector psi0) {
  ModelSpec m;
  m.dim = 2;
  m.hamiltonian = LinearOperator::zero(2);
  m.channels.push_back({sigma_minus(), std::move(rate), "decay"});
  m.initial_state = std::move(psi0);
  return m;
}

PresetParams merged(const PresetInfo& info, const PresetParams& overrides) {
  PresetParams p = info.defaults;
  for (const auto& [key, value] : overrides) {
    if (!p.contains(key)) {
      throw ModelError("preset '" + info.name + "': unknown parameter '" + key + "'");
    }
    p[key] = value;
  }
  return p;
}

}  // namespace

LinearOperator sigma_minus() { return two_level(0, 1, 0, 0); }
LinearOperator sigma_plus() { return two_level(0, 0, 1, 0); }
LinearOperator sigma_x() { return two_level(0, 1, 1, 0); }
LinearOperator sigma_y() { return two_level(0, kI, -kI, 0); }
LinearOperator sigma_z() { return two_level(-1, 0, 0, 1); }

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"markov-decay", "two-level amplitude damping, constant rate gamma, start in |e>", {{"gamma", 1.0}}},
      {"oscillating-decay",
       "two-level amplitude damping with rate delta0*cos(omega t), start in |e>",
       {{"delta0", 1.0}, {"omega", 2.0 * std::numbers::pi}}},
      {"two-channel",
       "decay at constant rate gamma plus sigma_z dephasing at offset + amplitude*cos(omega t), "
       "start in (|g>+|e>)/sqrt2",
       {{"gamma", 0.5}, {"amplitude", 1.0}, {"omega", 2.0 * std::numbers::pi}, {"offset", 0.3}}},
      {"breakdown-toy",
       "decay at +gamma until t_switch, then at -gamma_minus; the ground ray empties while reverse flux "
       "persists",
       {{"gamma", 1.0}, {"t_switch", 0.01}, {"gamma_minus", 0.005}}},
  };
  return catalog;
}

ModelSpec make_preset(std::string_view name, const PresetParams& overrides) {
  const PresetInfo* info = nullptr;
  for (const auto& p : preset_catalog()) {
    if (p.name == name) info = &p;
  }
  if (info == nullptr) throw ModelError("unknown preset '" + std::string(name) + "'");
  const PresetParams p = merged(*info, overrides);
  const StateVector excited = StateVector::basis(2, 1);

  ModelSpec m;
  if (name == "markov-decay") {
    m = decay_model(RateFunction::constant(p.at("gamma")), excited);
  } else if (name == "oscillating-decay") {
    m = decay_model(RateFunction::cosine(p.at("delta0"), p.at("omega")), excited);
  } else if (name == "two-channel") {
    const double s = 1.0 / std::sqrt(2.0);
    m = decay_model(RateFunction::constant(p.at("gamma")), StateVector{s, s});
    m.channels.push_back({sigma_z(), RateFunction::cosine(p.at("amplitude"), p.at("omega"), p.at("offset")), "dephasing"});
  } else {
    const double t_switch = p.at("t_switch");
    if (!(t_switch > 0.0)) throw ModelError("preset 'breakdown-toy': t_switch must be positive");
    m = decay_model(RateFunction(RateKind::piecewise_constant, {0.0, p.at("gamma"), t_switch, -p.at("gamma_minus")}),
                    excited);
  }
  m.validate();
  return m;
}

}  // namespace nmqj
