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


// Serial reference vs OpenMP kernels on a large effective ensemble.
// Run with OMP_NUM_THREADS=<p> to set the parallel width.

#include <random>

#include <benchmark/benchmark.h>

#include "nmqj/jump_engine.hpp"
#include "nmqj/model.hpp"
#include "nmqj/oracle.hpp"
#include "nmqj/propagator.hpp"

namespace {

using namespace nmqj;

ModelSpec bench_model(Index d) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  auto rnd = [&] {
    CMatrix m(d, d);
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c) m(r, c) = {nd(gen), nd(gen)};
    return m;
  };
  ModelSpec m;
  m.dim = d;
  const CMatrix h = rnd();
  m.hamiltonian = LinearOperator(CMatrix(0.5 * (h + h.adjoint())));
  for (int k = 0; k < 3; ++k) m.channels.push_back({LinearOperator(rnd()), RateFunction::constant(1e-3), "C" + std::to_string(k)});
  m.initial_state = StateVector::basis(d, 0);
  return m;
}

EffectiveEnsemble bench_ensemble(Index d, std::size_t rays) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  EffectiveEnsemble ens(StateVector::basis(d, 0), 100);
  for (std::size_t i = 1; i < rays; ++i) {
    StateVector psi(d);
    for (Index j = 0; j < d; ++j) psi[j] = {nd(gen), nd(gen)};
    ens.add_ray(psi.normalized(), 100);
  }
  return ens;
}

void BM_Propagate(benchmark::State& state, Execution exec) {
  const Index d = 16;
  const auto rays = static_cast<std::size_t>(state.range(0));
  const ModelSpec m = bench_model(d);
  const EffectiveEnsemble ens = bench_ensemble(d, rays);
  std::vector<StateVector> out(rays);
  const PropagatorConfig cfg{1e-3, true, PropagatorMethod::rk4};
  for (auto _ : state) {
    for_each_index(rays, exec, [&](std::size_t i) { out[i] = propagate(ens.representative(i), m, 0.0, cfg); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rays));
}

void BM_Sample(benchmark::State& state, Execution exec) {
  const auto rays = static_cast<std::size_t>(state.range(0));
  const EffectiveEnsemble ens = bench_ensemble(4, rays);
  ProposalSet ps;
  ps.per_ray.resize(rays);
  for (std::size_t i = 0; i < rays; ++i)
    for (std::size_t l = 0; l < 3; ++l) ps.per_ray[i].push_back({i, (i + 1) % rays, l, JumpDirection::forward, 0.01});
  std::uint64_t step = 0;
  for (auto _ : state) {
    auto tr = sample_transitions(ens, ps, 7, step++, exec);
    benchmark::DoNotOptimize(tr.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rays));
}

void BM_PIntegratorStep(benchmark::State& state, Execution exec) {
  const Index d = 8;
  const auto rays = static_cast<std::size_t>(state.range(0));
  const ModelSpec m = bench_model(d);
  const EffectiveEnsemble ens = bench_ensemble(d, rays);
  WeightedEnsemble w{ens.representatives(), std::vector<double>(rays, 1.0 / static_cast<double>(rays))};
  PIntegratorOptions opts;
  opts.execution = exec;
  opts.max_rays = 1 << 20;
  for (auto _ : state) {
    auto next = p_integrator_step(w, m, 0.0, 1e-3, opts);
    benchmark::DoNotOptimize(next.weights.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Propagate, serial, nmqj::Execution::serial)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(BM_Propagate, parallel, nmqj::Execution::parallel)->Arg(256)->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, serial, nmqj::Execution::serial)->Arg(4096);
BENCHMARK_CAPTURE(BM_Sample, parallel, nmqj::Execution::parallel)->Arg(4096);
BENCHMARK_CAPTURE(BM_PIntegratorStep, serial, nmqj::Execution::serial)->Arg(64);
BENCHMARK_CAPTURE(BM_PIntegratorStep, parallel, nmqj::Execution::parallel)->Arg(64);

BENCHMARK_MAIN();
