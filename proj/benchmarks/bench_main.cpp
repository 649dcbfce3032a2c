// This file is part of Ravel, a C++ toolkit for policy evaluation in
// robust average-reward Markov decision processes.
//
// MIT License
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to deal
// in the Software without restriction, including without limitation the rights
// to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
// copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
// OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
// SOFTWARE.

#include <benchmark/benchmark.h>

#include "ravel/generators.hpp"
#include "ravel/mlmc.hpp"
#include "ravel/seminorm.hpp"
#include "ravel/td.hpp"

namespace {

using namespace ravel;

struct Instance {
    Vector p;
    Vector v;
    Matrix metric;
};

Instance make_instance(int n, std::uint64_t seed) {
    Rng rng(seed);
    Instance inst;
    inst.p = rng.simplex(n);
    inst.v = Vector(n);
    for (int i = 0; i < n; ++i) inst.v[i] = rng.u01();
    inst.metric = Matrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inst.metric(i, j) = std::abs(i - j);
    return inst;
}

void BM_SupportContamination(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<int>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(support_contamination(inst.p, inst.v, 0.2).value);
}
BENCHMARK(BM_SupportContamination)->Arg(8)->Arg(32)->Arg(128);

void BM_SupportTvGreedy(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<int>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(support_tv_greedy(inst.p, inst.v, 0.2).value);
}
BENCHMARK(BM_SupportTvGreedy)->Arg(8)->Arg(32)->Arg(128);

void BM_SupportWasserstein(benchmark::State& state) {
    const Instance inst = make_instance(static_cast<int>(state.range(0)), 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            support_wasserstein(inst.p, inst.v, 0.5, inst.metric, 1.0).value);
}
BENCHMARK(BM_SupportWasserstein)->Arg(8)->Arg(16)->Arg(32);

void BM_MlmcEstimate(benchmark::State& state) {
    const Instance inst = make_instance(8, 4);
    const RowSampler sampler(inst.p);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    const MlmcConfig cfg{static_cast<int>(state.range(0))};
    Rng rng(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_support_mlmc(sampler, inst.v, spec, cfg, rng).value);
}
BENCHMARK(BM_MlmcEstimate)->Arg(4)->Arg(8)->Arg(12);

void BM_LyapunovSolve(benchmark::State& state) {
    const InducedChain chain(builtin_chain("P4"));
    const FluctuationMatrix q = fluctuation_matrix(chain);
    const double rho = spectral_radius(q.q);
    const double alpha = std::min(0.99, 0.5 * (1.0 + rho));
    for (auto _ : state) benchmark::DoNotOptimize(solve_discrete_lyapunov(q, alpha).m);
}
BENCHMARK(BM_LyapunovSolve);

void BM_RobustSeminormEval(benchmark::State& state) {
    const InducedChain chain(builtin_chain("P1"));
    Rng rng(6);
    const auto family =
        sample_uncertainty_family(chain, UncertaintySpec::contamination(0.15), 30, rng);
    const ExtremalSurrogate sur = build_extremal_surrogate(family, 3, 25, 0.25, rng);
    const Vector x = Rng(7).unit_sphere(5);
    for (auto _ : state) benchmark::DoNotOptimize(robust_seminorm_eval(sur, x));
}
BENCHMARK(BM_RobustSeminormEval);

void BM_RviOracle(benchmark::State& state) {
    Rng rng(11);
    const TabularMdp mdp = dirichlet_mdp(5, 2, 1.0, rng);
    const Policy policy = Policy::uniform(5, 2);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.15);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            robust_rvi_oracle(mdp, policy, spec, 1e-9, 1000000, 0).g_star);
}
BENCHMARK(BM_RviOracle);

} // namespace

BENCHMARK_MAIN();
