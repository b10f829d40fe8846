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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "nmqj/jump_engine.hpp"
#include "nmqj/model.hpp"

using namespace nmqj;

namespace {

const StateVector g = StateVector::basis(2, 0);
const StateVector e = StateVector::basis(2, 1);
const double r2 = 1.0 / std::sqrt(2.0);

Channel decay(double rate) { return {sigma_minus(), RateFunction::constant(rate), "decay"}; }

EffectiveEnsemble two_ray(std::int64_t n_e, std::int64_t n_g) {
  EffectiveEnsemble ens(e, n_e);
  ens.add_ray(g, n_g);
  return ens;
}

StateVector random_state(std::mt19937_64& gen, Index d) {
  std::normal_distribution<double> nd;
  StateVector psi(d);
  for (Index i = 0; i < d; ++i) psi[i] = {nd(gen), nd(gen)};
  return psi.normalized();
}

LinearOperator random_operator(std::mt19937_64& gen, Index d) {
  std::normal_distribution<double> nd;
  CMatrix m(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) m(r, c) = {nd(gen), nd(gen)};
  return LinearOperator(m);
}

// |<a|b>|^2 computed without the library's inner().
double overlap2(const StateVector& a, const StateVector& b) {
  Complex s = 0.0;
  for (Index i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return std::norm(s) / (a.squared_norm() * b.squared_norm());
}

}  // namespace

TEST_CASE("canonical phase") {
  const Complex ph = std::polar(1.0, 0.7);
  const StateVector psi{0.3 * ph, 0.954 * ph};
  const StateVector c = canonical_phase(psi);
  CHECK(c[1].imag() == 0.0);
  CHECK(c[1].real() > 0.0);
  CHECK(std::abs(c[0] - 0.3) < 1e-15);
  // Ties pick the lowest index.
  const StateVector tie = canonical_phase(StateVector{Complex(0.0, r2), Complex(-r2, 0.0)});
  CHECK(tie[0] == Complex(r2, 0.0));
  CHECK(canonical_phase(canonical_phase(psi)) == canonical_phase(psi));
}

TEST_CASE("ray equivalence examples and relation properties") {
  CHECK(ray_equivalent(e, std::polar(1.0, std::numbers::pi / 3) * e, 1e-10));
  CHECK_FALSE(ray_equivalent(e, g, 1e-10));
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 500; ++trial) {
    const StateVector a = random_state(gen, 2 + trial % 4);
    const StateVector b = random_state(gen, a.dim());
    const StateVector a2 = std::polar(1.0, phase(gen)) * a;
    CHECK(ray_equivalent(a, a, 1e-10));
    CHECK(ray_equivalent(a, a2, 1e-10));
    CHECK(ray_equivalent(a2, a, 1e-10));
    CHECK(ray_equivalent(a, b, 1e-10) == ray_equivalent(b, a, 1e-10));
    CHECK((canonical_phase(a) - canonical_phase(a2)).norm() < 1e-14);
  }
}

TEST_CASE("forward jump probability and target") {
  CHECK(forward_jump_probability(e, decay(2.0), 0.0, 0.01) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(forward_jump_probability(e, decay(-1.0), 0.0, 0.01) == 0.0);
  CHECK(forward_jump_probability(g, decay(2.0), 0.0, 0.01) == 0.0);
  CHECK(forward_jump_target(e, decay(1.0)) == g);
  CHECK(forward_jump_target(StateVector{r2, r2}, decay(1.0)) == g);
  CHECK_THROWS(forward_jump_target(g, decay(1.0)));
}

TEST_CASE("reverse jump probability") {
  const EffectiveEnsemble ens = two_ray(80, 20);
  CHECK(reverse_jump_probability(ens.ray(1), ens.ray(0), decay(-1.0), 0, ens, 0.0, 0.01) ==
        doctest::Approx(0.04).epsilon(1e-15));
  CHECK(reverse_jump_probability(ens.ray(1), ens.ray(0), decay(1.0), 0, ens, 0.0, 0.01) == 0.0);

  const EffectiveEnsemble empty_g = two_ray(100, 0);
  try {
    reverse_jump_probability(empty_g.ray(1), empty_g.ray(0), decay(-1.0), 0, empty_g, 0.25, 0.01);
    FAIL("expected PositivityBreakdown");
  } catch (const PositivityBreakdown& b) {
    CHECK(b.source_ray == 1);
    CHECK(b.target_ray == 0);
    CHECK(b.channel == 0);
    CHECK(b.channel_label == "decay");
    CHECK(b.reverse_flux == doctest::Approx(1.0));
    CHECK(b.t == 0.25);
  }
  CHECK_THROWS_AS(reverse_jump_probability(ens.ray(0), ens.ray(1), decay(-1.0), 0, ens, 0.0, 0.01),
                  std::invalid_argument);
}

TEST_CASE("enumerate proposals: forward") {
  const ModelSpec md = make_preset("markov-decay");
  const EffectiveEnsemble ens(e, 1000);
  const ProposalSet ps = enumerate_proposals(ens, md, 0.0, 1e-3);
  REQUIRE(ps.per_ray.size() == 1);
  REQUIRE(ps.per_ray[0].size() == 1);
  const JumpProposal& p = ps.per_ray[0][0];
  CHECK(p.direction == JumpDirection::forward);
  CHECK(p.probability == doctest::Approx(1e-3).epsilon(1e-15));
  REQUIRE(ps.new_rays.size() == 1);
  CHECK(p.target_ray == 1);
  CHECK(ps.new_rays[0] == g);
}

TEST_CASE("enumerate proposals: reverse against a brute-force pair scan") {
  const ModelSpec osc = make_preset("oscillating-decay");
  const double t = 0.5, dt = 1e-3;
  const double delta = osc.channels[0].rate(t);
  REQUIRE(delta < 0.0);

  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    // Two physical rays plus decoys the channel does not connect.
    std::uniform_int_distribution<std::int64_t> cnt(1, 500);
    EffectiveEnsemble ens(e, cnt(gen));
    ens.add_ray(g, cnt(gen));
    for (int k = 0; k < trial % 3; ++k) ens.add_ray(random_state(gen, 2), cnt(gen));

    const ProposalSet ps = enumerate_proposals(ens, osc, t, dt);
    CHECK(ps.new_rays.empty());

    // Oracle: every (source, target) pair with C phi_target proportional to phi_source.
    std::vector<JumpProposal> expected;
    const LinearOperator& c = osc.channels[0].jump_operator;
    for (std::size_t j = 0; j < ens.size(); ++j) {
      const StateVector img = apply(c, ens.representative(j));
      if (img.squared_norm() == 0.0) continue;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        if (1.0 - overlap2(ens.representative(i), img) < 1e-10) {
          const double p = dt * (-delta) * static_cast<double>(ens.count(j)) / static_cast<double>(ens.count(i)) *
                           img.squared_norm();
          expected.push_back({i, j, 0, JumpDirection::reverse, p});
        }
      }
    }
    std::vector<JumpProposal> got;
    for (const auto& v : ps.per_ray) got.insert(got.end(), v.begin(), v.end());
    REQUIRE(got.size() == expected.size());
    for (const auto& x : expected) {
      auto it = std::find_if(got.begin(), got.end(),
                             [&](const JumpProposal& y) { return y.source_ray == x.source_ray && y.target_ray == x.target_ray; });
      REQUIRE(it != got.end());
      CHECK(it->direction == JumpDirection::reverse);
      CHECK(std::abs(it->probability - x.probability) <= 1e-15 * x.probability);
    }
  }

  // The spec's concrete case: {|g>:N_g, |e>:N_e}.
  const EffectiveEnsemble ens = two_ray(300, 700);
  const ProposalSet ps = enumerate_proposals(ens, osc, t, dt);
  REQUIRE(ps.per_ray[1].size() == 1);
  CHECK(ps.per_ray[0].empty());
  CHECK(ps.per_ray[1][0].target_ray == 0);
  CHECK(ps.per_ray[1][0].probability == doctest::Approx(dt * 1.0 * 300.0 / 700.0).epsilon(1e-12));
}

TEST_CASE("enumerate proposals: breakdown and timestep guard") {
  const ModelSpec osc = make_preset("oscillating-decay");
  EffectiveEnsemble lone(e, 100);
  CHECK_THROWS_AS(enumerate_proposals(lone, osc, 0.5, 1e-3), PositivityBreakdown);
  try {
    enumerate_proposals(lone, osc, 0.5, 1e-3);
  } catch (const PositivityBreakdown& b) {
    CHECK(b.source_ray == kNoRay);
    CHECK(b.target_ray == 0);
  }
  EffectiveEnsemble zero_g = two_ray(100, 0);
  CHECK_THROWS_AS(enumerate_proposals(zero_g, osc, 0.5, 1e-3), PositivityBreakdown);

  const ModelSpec md = make_preset("markov-decay", {{"gamma", 200.0}});
  try {
    enumerate_proposals(EffectiveEnsemble(e, 10), md, 0.0, 1e-3);
    FAIL("expected TimestepTooLarge");
  } catch (const TimestepTooLarge& tt) {
    CHECK(tt.total_probability == doctest::Approx(0.2));
    CHECK(tt.limit == 0.1);
    CHECK(tt.suggested_dt == doctest::Approx(5e-4));
  }
}

TEST_CASE("partition exclusivity") {
  const ModelSpec osc = make_preset("oscillating-decay");
  const EffectiveEnsemble ens = two_ray(400, 600);
  for (int s = 0; s < 200; ++s) {
    const double t = s * 0.01;
    ProposalSet ps;
    try {
      ps = enumerate_proposals(ens, osc, t, 1e-3);
    } catch (const PositivityBreakdown&) {
      FAIL("unexpected breakdown");
    }
    int fwd = 0, rev = 0;
    for (const auto& v : ps.per_ray)
      for (const auto& p : v) (p.direction == JumpDirection::forward ? fwd : rev)++;
    CHECK((fwd == 0 || rev == 0));
    if (osc.channels[0].rate(t) > 0) CHECK(rev == 0);
    if (osc.channels[0].rate(t) < 0) CHECK(fwd == 0);
  }
}

TEST_CASE("no-jump complement") {
  const std::vector<JumpProposal> two{{0, 1, 0, JumpDirection::forward, 0.02}, {0, 2, 1, JumpDirection::forward, 0.03}};
  CHECK(no_jump_probability(two) == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(no_jump_probability({}) == 1.0);
  const std::vector<JumpProposal> big{{0, 1, 0, JumpDirection::forward, 0.7}, {0, 2, 1, JumpDirection::forward, 0.5}};
  CHECK_THROWS_AS(no_jump_probability(big), TimestepTooLarge);
}

TEST_CASE("sampling: binomial statistics, determinism, conservation") {
  ProposalSet ps;
  ps.per_ray = {{{0, 1, 0, JumpDirection::forward, 0.02}}, {}};
  EffectiveEnsemble ens = two_ray(1000, 0);

  // Mean over many steps matches N p with the binomial spread.
  const int reps = 2000;
  double sum = 0.0;
  for (int s = 0; s < reps; ++s) {
    const auto tr = sample_transitions(ens, ps, 99, static_cast<std::uint64_t>(s));
    for (const auto& x : tr) sum += static_cast<double>(x.count);
  }
  const double mean = sum / reps;
  CHECK(std::abs(mean - 20.0) < 4.0 * std::sqrt(1000 * 0.02 * 0.98 / reps));

  // N = 1e5 single step within 4 sigma.
  EffectiveEnsemble big = two_ray(100000, 0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tr = sample_transitions(big, ps, seed, 0);
    const double n = tr.empty() ? 0.0 : static_cast<double>(tr[0].count);
    CHECK(std::abs(n - 2000.0) <= 4.0 * std::sqrt(100000 * 0.02 * 0.98));
  }

  ProposalSet zero;
  zero.per_ray = {{{0, 1, 0, JumpDirection::forward, 0.0}}, {}};
  CHECK(sample_transitions(ens, zero, 1, 1).empty());

  const auto a = sample_transitions(ens, ps, 5, 17);
  const auto b = sample_transitions(ens, ps, 5, 17);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].count == b[i].count);

  apply_transfers(ens, a);
  CHECK(ens.count(0) + ens.count(1) == 1000);
  CHECK_NOTHROW(ens.check_invariants());
}

TEST_CASE("sampling: multinomial over several lanes, serial equals parallel") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 0.02);
  EffectiveEnsemble ens(e, 50000);
  for (int i = 0; i < 40; ++i) ens.add_ray(random_state(gen, 2), 1000 + i);
  ProposalSet ps;
  ps.per_ray.resize(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i)
    for (std::size_t l = 0; l < 4; ++l) ps.per_ray[i].push_back({i, (i + l + 1) % ens.size(), l, JumpDirection::forward, u(gen)});
  const auto s = sample_transitions(ens, ps, 123, 7, Execution::serial);
  const auto p = sample_transitions(ens, ps, 123, 7, Execution::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].source_ray == p[i].source_ray);
    CHECK(s[i].target_ray == p[i].target_ray);
    CHECK(s[i].count == p[i].count);
  }
  EffectiveEnsemble after = ens;
  apply_transfers(after, s);
  std::int64_t tot = 0;
  for (auto c : after.counts()) {
    CHECK(c >= 0);
    tot += c;
  }
  CHECK(tot == ens.total());
}

TEST_CASE("duality examples") {
  const EffectiveEnsemble ens = two_ray(30, 70);
  const auto [f, r] = duality_check(ens.ray(0), ens.ray(1), decay(1.0), ens, 0.0, 0.01);
  CHECK(f == doctest::Approx(3e-3).epsilon(1e-14));
  CHECK(r == doctest::Approx(3e-3).epsilon(1e-14));
  const auto [f0, r0] = duality_check(ens.ray(0), ens.ray(1), decay(0.0), ens, 0.0, 0.01);
  CHECK(f0 == 0.0);
  CHECK(r0 == 0.0);
  const auto [fk, rk] = duality_check(ens.ray(1), ens.ray(0), decay(1.0), ens, 0.0, 0.01);
  CHECK(fk == 0.0);
  CHECK(rk == 0.0);
}

TEST_CASE("duality property over random ensembles and channels") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::int64_t> cnt(1, 100000);
  std::uniform_real_distribution<double> rate(0.01, 5.0), step(1e-5, 1e-2);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 2 + trial % 4;
    const LinearOperator c = random_operator(gen, d);
    const StateVector psi = random_state(gen, d);
    EffectiveEnsemble ens(psi, cnt(gen));
    const std::size_t phi = ens.add_ray(apply(c, psi).normalized(), cnt(gen));
    for (int k = 0; k < trial % 3; ++k) ens.add_ray(random_state(gen, d), cnt(gen));
    const Channel ch{c, RateFunction::constant(trial % 2 ? rate(gen) : -rate(gen)), "k"};
    const auto [fwd, rev] = duality_check(ens.ray(0), ens.ray(phi), ch, ens, 0.0, step(gen));
    REQUIRE(fwd > 0.0);
    CHECK(std::abs(fwd - rev) <= 1e-14 * fwd);
  }
}

TEST_CASE("merge equivalent rays") {
  EffectiveEnsemble ens(e, 10);
  ens.add_ray(g, 5);
  ens.add_ray(std::polar(1.0, 0.4) * e, 30);
  ens.add_ray(g, 0);
  CHECK(ens.merge_equivalent() == 2);
  REQUIRE(ens.size() == 2);
  CHECK(ens.count(0) == 40);
  CHECK(ens.count(1) == 5);
  CHECK(ens.total() == 45);
  CHECK_NOTHROW(ens.check_invariants());
  CHECK_THROWS_AS(ens.transfer(1, 0, 6), std::logic_error);
}
