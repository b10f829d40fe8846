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

#include "nmqj/rate.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace nmqj {

namespace {

struct KindName {
  RateKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {RateKind::constant, "constant"},
    {RateKind::piecewise_constant, "piecewise-constant"},
    {RateKind::damped_cosine, "damped-cosine"},
    {RateKind::cosine, "cosine"},
    {RateKind::table_lookup, "table-lookup"},
};

void check_breakpoint_pairs(const std::vector<double>& p, std::size_t min_pairs, const char* kind) {
  if (p.size() % 2 != 0 || p.size() / 2 < min_pairs) {
    throw std::invalid_argument(std::string(kind) + " rate: parameters must be (time, value) pairs, at least " +
                                std::to_string(min_pairs));
  }
  for (std::size_t i = 2; i < p.size(); i += 2) {
    if (!(p[i] > p[i - 2])) {
      throw std::invalid_argument(std::string(kind) + " rate: breakpoints must be strictly increasing");
    }
  }
}

}  // namespace

std::string_view to_string(RateKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) {
      return kn.name;
    }
  }
  return "unknown";
}

RateKind rate_kind_from_string(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) {
      return kn.kind;
    }
  }
  throw std::invalid_argument("unknown rate kind '" + std::string(name) + "'");
}

RateFunction::RateFunction(RateKind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {
  if (std::any_of(params_.begin(), params_.end(), [](double v) { return !std::isfinite(v); })) {
    throw std::invalid_argument("rate parameters must be finite");
  }
  switch (kind_) {
    case RateKind::constant:
      if (params_.size() != 1) throw std::invalid_argument("constant rate takes 1 parameter [value]");
      break;
    case RateKind::damped_cosine:
      if (params_.size() != 3) throw std::invalid_argument("damped-cosine rate takes 3 parameters [A, kappa, omega]");
      break;
    case RateKind::cosine:
      if (params_.size() != 2 && params_.size() != 3) {
        throw std::invalid_argument("cosine rate takes 2 or 3 parameters [A, omega (, offset)]");
      }
      break;
    case RateKind::piecewise_constant:
      check_breakpoint_pairs(params_, 1, "piecewise-constant");
      break;
    case RateKind::table_lookup:
      check_breakpoint_pairs(params_, 2, "table-lookup");
      break;
  }
}

RateFunction RateFunction::cosine(double amplitude, double omega, double offset) {
  if (offset == 0.0) {
    return {RateKind::cosine, {amplitude, omega}};
  }
  return {RateKind::cosine, {amplitude, omega, offset}};
}

double RateFunction::operator()(double t) const {
  const auto& p = params_;
  switch (kind_) {
    case RateKind::constant:
      return p[0];
    case RateKind::damped_cosine:
      return p[0] * std::exp(-p[1] * t) * std::cos(p[2] * t);
    case RateKind::cosine:
      return (p.size() == 3 ? p[2] : 0.0) + p[0] * std::cos(p[1] * t);
    case RateKind::piecewise_constant: {
      if (t < p[0]) {
        throw RateDomainError("piecewise-constant rate evaluated before first breakpoint");
      }
      std::size_t seg = 0;
      while (seg + 2 < p.size() && t >= p[seg + 2]) {
        seg += 2;
      }
      return p[seg + 1];
    }
    case RateKind::table_lookup: {
      const double t_first = p[0];
      const double t_last = p[p.size() - 2];
      if (t < t_first || t > t_last) {
        throw RateDomainError("table-lookup rate evaluated outside [" + std::to_string(t_first) + ", " +
                              std::to_string(t_last) + "]");
      }
      std::size_t i = 0;
      while (i + 4 < p.size() && t > p[i + 2]) {
        i += 2;
      }
      const double t0 = p[i], v0 = p[i + 1], t1 = p[i + 2], v1 = p[i + 3];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

RatePartition rate_partition(double delta) {
  if (!std::isfinite(delta)) {
    throw std::domain_error("rate_partition: non-finite decay rate");
  }
  if (delta > 0.0) {
    return {delta, 0.0};
  }
  if (delta < 0.0) {
    return {0.0, -delta};
  }
  return {0.0, 0.0};
}

}  // namespace nmqj
