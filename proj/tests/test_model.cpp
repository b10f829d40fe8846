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
#include <string>

#include "doctest.h"
#include "nmqj/model.hpp"

using namespace nmqj;

namespace {

std::string error_of(const std::string& text) {
  try {
    load_model(text);
  } catch (const ModelError& e) {
    return e.what();
  }
  return "";
}

const char* kExplicit = R"({
  "dim": 2,
  "hamiltonian": [[0, 0], [0, 1]],
  "channels": [
    {"label": "decay", "operator": [[0, 1], [0, 0]], "rate": {"kind": "constant", "params": [1.0]}}
  ],
  "initial_state": [[0.6, 0], [0, 0.8]]
})";

}  // namespace

TEST_CASE("preset expansion through load_model") {
  const ModelSpec m = load_model(R"({"preset": "markov-decay"})");
  REQUIRE(m.channels.size() == 1);
  CHECK(m.channels[0].jump_operator == sigma_minus());
  CHECK(m.channels[0].rate.kind() == RateKind::constant);
  CHECK(m.channels[0].rate(3.0) == 1.0);
  CHECK(m.initial_state == StateVector::basis(2, 1));

  const ModelSpec fast = load_model(R"({"preset": "markov-decay", "params": {"gamma": 2.5}})");
  CHECK(fast.channels[0].rate(0.0) == 2.5);
}

TEST_CASE("explicit model parses") {
  const ModelSpec m = load_model(kExplicit);
  CHECK(m.dim == 2);
  CHECK(m.hamiltonian(1, 1) == Complex(1.0, 0.0));
  CHECK(m.initial_state[1] == Complex(0.0, 0.8));
  CHECK(m.channels[0].label == "decay");
}

TEST_CASE("non-Hermitian hamiltonian is rejected") {
  const std::string msg = error_of(R"({
    "dim": 2, "hamiltonian": [[0, 0.5], [0.2, 1]], "channels": [], "initial_state": [1, 0]})");
  CHECK(msg.find("non-Hermitian") != std::string::npos);
  CHECK(msg.find("hamiltonian") != std::string::npos);
}

TEST_CASE("dimension mismatch between H and C is rejected") {
  const std::string msg = error_of(R"({
    "dim": 2, "hamiltonian": [[0, 0], [0, 1]],
    "channels": [{"operator": [[0,1,0],[0,0,1],[0,0,0]], "rate": {"kind": "constant", "params": [1]}}],
    "initial_state": [1, 0]})");
  CHECK(msg.find("dimension") != std::string::npos);
  CHECK(msg.find("channels[0]") != std::string::npos);
}

TEST_CASE("diagnostics") {
  const std::string parse = error_of("{\n  \"dim\": 2,\n  \"hamiltonian\": [[0, 0] [0, 1]]\n}");
  CHECK(parse.find("line 3") != std::string::npos);

  CHECK(error_of(R"({"dim": 2, "hamiltonian": [[0,0],[0,0]], "channels": [], "initial_state": [1, 1]})")
            .find("unnormalized") != std::string::npos);
  CHECK(error_of(R"({"preset": "nope"})").find("nope") != std::string::npos);
  CHECK(error_of(R"({"preset": "markov-decay", "dim": 2})").find("mutually exclusive") != std::string::npos);
  CHECK(error_of(R"({"preset": "markov-decay", "params": {"omega": 1}})").find("omega") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "hamiltonian": [[0,0],[0,0]], "initial_state": [1, 0],
    "channels": [{"operator": [[0,1],[0,0]], "rate": {"kind": "wobbly", "params": [1]}}]})")
            .find("channels[0].rate") != std::string::npos);
  CHECK(error_of(R"({"dim": 2, "hamiltonian": [[0,0],[0,0]], "initial_state": [1, 0], "channels": [
    {"label": "a", "operator": [[0,1],[0,0]], "rate": {"kind": "constant", "params": [1]}},
    {"label": "a", "operator": [[0,1],[0,0]], "rate": {"kind": "constant", "params": [1]}}]})")
            .find("label") != std::string::npos);
}

TEST_CASE("every preset round-trips through render_model") {
  CHECK(preset_catalog().size() == 4);
  for (const auto& info : preset_catalog()) {
    CAPTURE(info.name);
    const ModelSpec m = make_preset(info.name);
    CHECK_NOTHROW(m.validate());
    const ModelSpec back = load_model(render_model(m));
    CHECK(back == m);
    CHECK(model_digest(back) == model_digest(m));
  }
}

TEST_CASE("observables round-trip and resolve") {
  ModelSpec m = make_preset("two-channel");
  m.observables.push_back({"x_half", 0.5 * sigma_x()});
  const ModelSpec back = load_model(render_model(m));
  CHECK(back == m);
  CHECK(resolve_observable(back, "x_half").op == 0.5 * sigma_x());
  CHECK(resolve_observable(back, "pop1").op(1, 1) == Complex(1.0, 0.0));
  CHECK(resolve_observable(back, "sz").op == sigma_z());
  CHECK_THROWS_AS(resolve_observable(back, "pop2"), ModelError);
  CHECK_THROWS_AS(resolve_observable(back, "bogus"), ModelError);
}

TEST_CASE("digest is stable and parameter sensitive") {
  const auto a = model_digest(make_preset("oscillating-decay"));
  CHECK(a.size() == 16);
  CHECK(a == model_digest(make_preset("oscillating-decay")));
  CHECK(a != model_digest(make_preset("oscillating-decay", {{"delta0", 1.5}})));
}

TEST_CASE("preset physics") {
  const ModelSpec osc = make_preset("oscillating-decay");
  CHECK(osc.channels[0].rate(0.5) == doctest::Approx(-1.0));
  const ModelSpec tc = make_preset("two-channel");
  REQUIRE(tc.channels.size() == 2);
  CHECK(tc.channels[1].jump_operator == sigma_z());
  CHECK(tc.channels[1].rate(0.5) == doctest::Approx(-0.7));
  const ModelSpec bt = make_preset("breakdown-toy");
  CHECK(bt.channels[0].rate(0.0) == 1.0);
  CHECK(bt.channels[0].rate(0.5) == -0.005);
}
