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

#include <array>
#include <cstdint>
#include <limits>

namespace nmqj {

/// Philox4x32-10 counter-based bijection (Salmon et al., Random123).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

/// Identifies an independent substream of the master seed.
struct StreamId {
  std::uint64_t step = 0;
  std::uint32_t ray = 0;
  std::uint32_t lane = 0;  // proposal / channel slot within a ray
};

/// UniformRandomBitGenerator over one (seed, StreamId) substream. Output is a
/// pure function of (seed, stream, draw index), so any thread may generate
/// any substream and get the same numbers.
class CounterStream {
 public:
  using result_type = std::uint32_t;

  CounterStream(std::uint64_t seed, StreamId id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buf_{};
  unsigned used_ = 4;
};

}  // namespace nmqj
