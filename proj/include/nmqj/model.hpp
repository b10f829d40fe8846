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

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nmqj/linalg.hpp"
#include "nmqj/rate.hpp"

namespace nmqj {

/// Raised for malformed or invalid model descriptions. what() carries the
/// field path (and line/column for JSON syntax errors).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One dissipative channel: constant jump operator C_k with signed rate Delta_k(t).
struct Channel {
  LinearOperator jump_operator;
  RateFunction rate;
  std::string label;

  friend bool operator==(const Channel&, const Channel&) = default;
};

struct NamedObservable {
  std::string name;
  LinearOperator op;

  friend bool operator==(const NamedObservable&, const NamedObservable&) = default;
};

/// Time-local master equation
///
///   d rho/dt = -i[H, rho] + sum_k Delta_k(t) (C_k rho C_k^+ - 1/2 {C_k^+ C_k, rho})
///
/// with constant H and C_k; all time dependence sits in the rates.
struct ModelSpec {
  Index dim = 0;
  LinearOperator hamiltonian;
  std::vector<Channel> channels;
  StateVector initial_state;
  std::vector<NamedObservable> observables;

  /// Throws ModelError on the first violated invariant.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Parses a model description (JSON). Either a "preset" (with optional
/// "params") or the explicit fields dim/hamiltonian/channels/initial_state.
ModelSpec load_model(std::string_view config_text);
ModelSpec load_model_file(const std::filesystem::path& path);

/// Explicit-field JSON rendering; load_model(render_model(m)) == m.
std::string render_model(const ModelSpec& model);

/// Stable 64-bit FNV-1a digest of render_model(), as 16 hex digits.
std::string model_digest(const ModelSpec& model);

// ---------------------------------------------------------------------------
// Two-level operators in the basis (|g>, |e>) = (index 0, index 1).

LinearOperator sigma_minus();
LinearOperator sigma_plus();
LinearOperator sigma_x();
LinearOperator sigma_y();
/// |e><e| - |g><g|
LinearOperator sigma_z();

using PresetParams = std::map<std::string, double>;

struct PresetInfo {
  std::string name;
  std::string description;
  PresetParams defaults;
};

const std::vector<PresetInfo>& preset_catalog();

/// Throws ModelError for an unknown preset or parameter name.
ModelSpec make_preset(std::string_view name, const PresetParams& overrides = {});

/// Resolves an observable by name: "pop<i>" (projector |i><i|), "sx"/"sy"/"sz"
/// for two-level models, otherwise a named observable declared in the model.
NamedObservable resolve_observable(const ModelSpec& model, std::string_view name);

}  // namespace nmqj
