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
#include <string>
#include <string_view>
#include <vector>

namespace nmqj {

enum class RateKind { constant, piecewise_constant, damped_cosine, cosine, table_lookup };

std::string_view to_string(RateKind kind);
/// Throws std::invalid_argument for unknown names.
RateKind rate_kind_from_string(std::string_view name);

/// Thrown when a rate is evaluated outside the window covered by its table.
class RateDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Time-dependent decay rate Delta_k(t). Parameter layout per kind:
///
///   constant            [value]
///   piecewise-constant  [b0, v0, b1, v1, ...]   v_i on [b_i, b_{i+1}), last segment unbounded
///   damped-cosine       [A, kappa, omega]       A exp(-kappa t) cos(omega t)
///   cosine              [A, omega (, offset)]   offset + A cos(omega t)
///   table-lookup        [t0, v0, t1, v1, ...]   linear interpolation on [t0, t_last]
class RateFunction {
 public:
  RateFunction() : RateFunction(RateKind::constant, {0.0}) {}
  RateFunction(RateKind kind, std::vector<double> params);

  static RateFunction constant(double value) { return {RateKind::constant, {value}}; }
  static RateFunction cosine(double amplitude, double omega, double offset = 0.0);
  static RateFunction damped_cosine(double amplitude, double kappa, double omega) {
    return {RateKind::damped_cosine, {amplitude, kappa, omega}};
  }

  RateKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  double operator()(double t) const;

  friend bool operator==(const RateFunction&, const RateFunction&) = default;

 private:
  RateKind kind_;
  std::vector<double> params_;
};

inline double eval_rate(const RateFunction& rate, double t) { return rate(t); }

/// Delta = plus - minus with plus, minus >= 0 and plus * minus == 0.
struct RatePartition {
  double plus = 0.0;
  double minus = 0.0;
};

/// Throws std::domain_error for NaN or infinite input.
RatePartition rate_partition(double delta);

}  // namespace nmqj
