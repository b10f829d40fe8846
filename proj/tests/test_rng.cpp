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
#include <set>
#include <vector>

#include "doctest.h"
#include "nmqj/rng.hpp"

using namespace nmqj;

TEST_CASE("philox known answers") {
  // Reference vectors from the Random123 distribution (philox4x32, 10 rounds).
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are deterministic and distinct") {
  CounterStream a(42, {7, 3, 1}), b(42, {7, 3, 1});
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  std::set<std::uint32_t> firsts;
  for (std::uint64_t step = 0; step < 4; ++step)
    for (std::uint32_t ray = 0; ray < 4; ++ray)
      for (std::uint32_t lane = 0; lane < 4; ++lane) firsts.insert(CounterStream(42, {step, ray, lane})());
  CHECK(firsts.size() == 64);
  CHECK(CounterStream(1, {0, 0, 0})() != CounterStream(2, {0, 0, 0})());
  CHECK(CounterStream(1ULL << 32, {0, 0, 0})() != CounterStream(0, {0, 0, 0})());
}

TEST_CASE("uniform doubles") {
  CounterStream s(9, {1, 2, 3});
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(var - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("step counter range") { CHECK_THROWS(CounterStream(0, {(1ULL << 32) + 1, 0, 0})); }
