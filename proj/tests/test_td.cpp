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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ravel/generators.hpp"
#include "ravel/seminorm.hpp"
#include "ravel/td.hpp"

using namespace ravel;

namespace {

TabularMdp single_chain_mdp(const Matrix& chain, const Vector& rewards) {
    Matrix r(rewards.size(), 1);
    r.col(0) = rewards;
    return TabularMdp(r, Kernel{chain});
}

// 3-state deterministic cycle: every estimator draw is exact.
TabularMdp cycle_mdp() {
    Matrix chain = Matrix::Zero(3, 3);
    chain(0, 1) = 1;
    chain(1, 2) = 1;
    chain(2, 0) = 1;
    Vector r(3);
    r << 0.9, 0.1, 0.5;
    return single_chain_mdp(chain, r);
}

} // namespace

TEST_CASE("robust Bellman operator on constant inputs and zero radius") {
    Rng rng(1);
    const Matrix chain = random_ergodic_chain(4, 1.0, rng);
    Vector r(4);
    for (int i = 0; i < 4; ++i) r[i] = rng.u01();
    const TabularMdp mdp = single_chain_mdp(chain, r);
    const Policy policy = Policy::uniform(4, 1);

    const Vector out = robust_bellman_exact(mdp, policy, Vector::Constant(4, 0.3), 0.0,
                                            UncertaintySpec::contamination(0.2));
    CHECK((out - (r + Vector::Constant(4, 0.3))).lpNorm<Eigen::Infinity>() < 1e-12);

    Vector v(4);
    for (int i = 0; i < 4; ++i) v[i] = rng.normal();
    const double g = 0.37;
    const Vector robust0 = robust_bellman_exact(mdp, policy, v, g,
                                                UncertaintySpec::total_variation(0.0));
    const Vector nonrobust = r - Vector::Constant(4, g) + chain * v;
    CHECK((robust0 - nonrobust).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("robust Bellman operator translation property") {
    Rng rng(3);
    const Matrix chain = random_ergodic_chain(5, 1.0, rng);
    Vector r(5);
    for (int i = 0; i < 5; ++i) r[i] = rng.u01();
    const TabularMdp mdp = single_chain_mdp(chain, r);
    const Policy policy = Policy::uniform(5, 1);
    for (const auto& spec :
         {UncertaintySpec::contamination(0.2), UncertaintySpec::total_variation(0.3),
          UncertaintySpec::wasserstein(
              0.4, Matrix::Ones(5, 5) - Matrix::Identity(5, 5), 1.0)}) {
        for (int i = 0; i < 50; ++i) {
            Vector v(5);
            for (int j = 0; j < 5; ++j) v[j] = rng.normal();
            const double c = rng.uniform(-2.0, 2.0);
            const Vector base = robust_bellman_exact(mdp, policy, v, 0.1, spec);
            const Vector shifted = robust_bellman_exact(
                mdp, policy, v + Vector::Constant(5, c), 0.1, spec);
            CHECK((shifted - base - Vector::Constant(5, c)).lpNorm<Eigen::Infinity>() <=
                  1e-12);
        }
    }
}

TEST_CASE("rvi oracle with zero radius matches the linear solve") {
    Rng rng(5);
    const TabularMdp mdp = dirichlet_mdp(4, 2, 1.0, rng);
    const Policy policy = Policy::uniform(4, 2);
    const auto fp = robust_rvi_oracle(mdp, policy, UncertaintySpec::contamination(0.0),
                                      1e-11, 1000000, 0);
    const double g = average_reward(mdp, policy, mdp.nominal_kernel);
    const ValueFunction v = relative_value_function(mdp, policy, mdp.nominal_kernel, 0);
    CHECK(std::abs(fp.g_star - g) < 1e-9);
    CHECK((fp.v_star.values - v.values).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("rvi oracle with constant rewards returns g = c, v = 0") {
    Rng rng(7);
    const Matrix chain = random_ergodic_chain(5, 1.0, rng);
    const TabularMdp mdp = single_chain_mdp(chain, Vector::Constant(5, 0.42));
    const auto fp = robust_rvi_oracle(mdp, Policy::uniform(5, 1),
                                      UncertaintySpec::contamination(0.3), 1e-11, 100000, 2);
    CHECK(std::abs(fp.g_star - 0.42) < 1e-10);
    CHECK(fp.v_star.values.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(fp.v_star.values[2] == 0.0);
}

TEST_CASE("rvi oracle on the 2-state contamination instance") {
    Matrix chain(2, 2);
    chain << 0.7, 0.3, 0.7, 0.3;
    Vector r(2);
    r << 1, 0;
    const TabularMdp mdp = single_chain_mdp(chain, r);
    const Policy policy = Policy::uniform(2, 1);
    const UncertaintySpec spec = UncertaintySpec::contamination(0.2);
    const auto fp = robust_rvi_oracle(mdp, policy, spec, 1e-12, 1000000, 1);

    // Self-consistency: Bellman residual at the fixed point.
    const Vector residual =
        robust_bellman_exact(mdp, policy, fp.v_star.values, fp.g_star, spec) -
        fp.v_star.values;
    CHECK(span_seminorm(residual) <= 1e-10);
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-10);

    // Vertex enumeration over contamination corners: per-state rows
    // (1-delta) p + delta e_s, worst average reward over the 4 corner kernels.
    double worst_g = 1e9;
    for (int c0 = 0; c0 < 2; ++c0)
        for (int c1 = 0; c1 < 2; ++c1) {
            Matrix corner(2, 2);
            corner.row(0) = 0.8 * chain.row(0);
            corner(0, c0) += 0.2;
            corner.row(1) = 0.8 * chain.row(1);
            corner(1, c1) += 0.2;
            worst_g = std::min(worst_g,
                               average_reward(mdp, policy, Kernel{corner}));
        }
    CHECK(fp.g_star == doctest::Approx(worst_g).epsilon(1e-9));
}

TEST_CASE("rvi oracle raises on exhausted iterations") {
    Matrix chain(2, 2);
    chain << 0.7, 0.3, 0.4, 0.6;
    Vector r(2);
    r << 1, 0;
    const TabularMdp mdp = single_chain_mdp(chain, r);
    CHECK_THROWS_AS(robust_rvi_oracle(mdp, Policy::uniform(2, 1),
                                      UncertaintySpec::contamination(0.2), 1e-12, 2, 0),
                    ConvergenceError);
}

TEST_CASE("value phase replays the deterministic damped iteration exactly") {
    const TabularMdp mdp = cycle_mdp();
    const Policy policy = Policy::uniform(3, 1);
    const UncertaintySpec spec = UncertaintySpec::contamination(0.3);

    TdConfig cfg;
    cfg.horizon = 200;
    cfg.value_step = {1.0, 3.0};
    cfg.anchor = 0;
    cfg.seed = 77;

    const auto result = td_value_phase(mdp, policy, spec, cfg);

    Vector v = Vector::Zero(3);
    for (long t = 0; t < cfg.horizon; ++t) {
        const Vector target = robust_bellman_exact(mdp, policy, v, 0.0, spec);
        v += cfg.value_step.at(t) * (target - v);
        v.array() -= v[0];
    }
    CHECK((result.v.values - v).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(result.v.values[0] == 0.0);
    CHECK(result.samples_consumed == 200 * 3);
}

TEST_CASE("value phase on a single state stays at zero") {
    Matrix chain = Matrix::Constant(1, 1, 1.0);
    const TabularMdp mdp = single_chain_mdp(chain, Vector::Constant(1, 0.5));
    TdConfig cfg;
    cfg.horizon = 50;
    cfg.seed = 3;
    const auto result = td_value_phase(mdp, Policy::uniform(1, 1),
                                       UncertaintySpec::contamination(0.0), cfg);
    CHECK(result.v.values[0] == 0.0);
}

TEST_CASE("gain phase converges instantly in the zero-noise regime") {
    // Single state: the only next state is deterministic, so every draw is
    // exact and the residual is constant.
    Matrix chain = Matrix::Constant(1, 1, 1.0);
    const TabularMdp mdp = single_chain_mdp(chain, Vector::Constant(1, 0.7));
    const UncertaintySpec spec = UncertaintySpec::contamination(0.3);
    TdConfig cfg;
    cfg.horizon = 10;
    cfg.gain_step = {1.0, 1.0};
    cfg.seed = 5;
    const ValueFunction v_star{Vector::Zero(1), 0};
    const auto result = td_gain_phase(mdp, Policy::uniform(1, 1), spec, v_star, cfg);
    CHECK(result.g == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("gain phase with constant rewards and zero value estimates c") {
    Rng rng(9);
    const Matrix chain = random_ergodic_chain(4, 1.0, rng);
    const TabularMdp mdp = single_chain_mdp(chain, Vector::Constant(4, 0.55));
    const UncertaintySpec spec = UncertaintySpec::contamination(0.2);
    TdConfig cfg;
    cfg.horizon = 100;
    cfg.gain_step = {1.0, 1.0};
    cfg.seed = 11;
    const ValueFunction zero{Vector::Zero(4), 0};
    const auto result = td_gain_phase(mdp, Policy::uniform(4, 1), spec, zero, cfg);
    // sigma-hat of the zero vector is 0 for contamination, so every residual
    // draw equals 0.55 exactly.
    CHECK(result.g == doctest::Approx(0.55).epsilon(1e-14));
}

TEST_CASE("five-state contamination pipeline approaches the oracle") {
    Rng rng(0);
    (void)rng;
    Rng mdp_rng(11);
    const TabularMdp mdp = dirichlet_mdp(5, 2, 1.0, mdp_rng);
    const Policy policy = Policy::uniform(5, 2);
    const UncertaintySpec spec = UncertaintySpec::contamination(0.15);
    const auto fp = robust_rvi_oracle(mdp, policy, spec, 1e-10, 1000000, 0);
    CHECK(fp.residual <= 1e-10);

    TdConfig cfg;
    cfg.horizon = 20000;
    cfg.value_step = {8.0, 10.0};
    cfg.gain_step = {1.0, 1.0};
    cfg.anchor = 0;
    cfg.seed = 42;
    const auto value = td_value_phase(mdp, policy, spec, cfg, &fp.v_star);
    const double v_err =
        (value.v.values - fp.v_star.values).lpNorm<Eigen::Infinity>();
    CHECK(v_err < 0.1);

    const auto gain = td_gain_phase(mdp, policy, spec, value.v, cfg, &fp.g_star);
    CHECK(std::abs(gain.g - fp.g_star) < 0.1);
}

TEST_CASE("td runs are reproducible for a fixed seed") {
    Rng mdp_rng(13);
    const TabularMdp mdp = dirichlet_mdp(4, 2, 1.0, mdp_rng);
    const Policy policy = Policy::uniform(4, 2);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    TdConfig cfg;
    cfg.horizon = 300;
    cfg.mlmc = MlmcConfig{6};
    cfg.seed = 99;
    const auto a = td_value_phase(mdp, policy, spec, cfg);
    const auto b = td_value_phase(mdp, policy, spec, cfg);
    CHECK((a.v.values - b.v.values).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(a.samples_consumed == b.samples_consumed);
}

TEST_CASE("per-call sample mean of a TV run tracks n_max + 2") {
    Rng mdp_rng(15);
    const TabularMdp mdp = dirichlet_mdp(4, 2, 1.0, mdp_rng);
    const Policy policy = Policy::uniform(4, 2);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    TdConfig cfg;
    cfg.horizon = 2000;
    cfg.mlmc = MlmcConfig{12};
    cfg.seed = 101;
    const auto result = td_value_phase(mdp, policy, spec, cfg);
    const double calls = 2000.0 * 4 * 2;
    const double per_call = result.samples_consumed / calls;
    // E[M] = n_max + 2 and E[M^2] = 3 * 2^{n_max+1} - 2 give the 3-sigma band.
    const double mean = 14.0;
    const double variance = 3.0 * (1 << 13) - 2.0 - mean * mean;
    CHECK(std::abs(per_call - mean) <= 3.0 * std::sqrt(variance / calls));
}

TEST_CASE("value-phase traces are recorded at increasing checkpoints") {
    Rng mdp_rng(17);
    const TabularMdp mdp = dirichlet_mdp(3, 1, 1.0, mdp_rng);
    const Policy policy = Policy::uniform(3, 1);
    const UncertaintySpec spec = UncertaintySpec::contamination(0.1);
    const auto fp = robust_rvi_oracle(mdp, policy, spec, 1e-10, 1000000, 0);
    TdConfig cfg;
    cfg.horizon = 100;
    cfg.seed = 19;
    cfg.trace_points = {30};
    const auto result = td_value_phase(mdp, policy, spec, cfg, &fp.v_star);
    REQUIRE(!result.trace.empty());
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        CHECK(result.trace[i].t > result.trace[i - 1].t);
        CHECK(result.trace[i].cumulative_samples >=
              result.trace[i - 1].cumulative_samples);
    }
    bool saw_30 = false, saw_100 = false;
    for (const auto& pt : result.trace) {
        if (pt.t == 30) saw_30 = true;
        if (pt.t == 100) saw_100 = true;
    }
    CHECK(saw_30);
    CHECK(saw_100);
}

TEST_CASE("sa_driver holds fixed points and matches the scalar closed form") {
    const auto identity_op = [](const Vector& x, long) { return x; };
    const auto zero_noise = [](const Vector&, long, Rng&) { return Vector::Zero(1); };
    Vector x0(1);
    x0 << 0.37;
    const auto fixed =
        sa_driver(identity_op, zero_noise, x0, StepSchedule{1.0, 3.0}, 100, 1);
    CHECK(fixed.x[0] == doctest::Approx(0.37).epsilon(1e-15));

    const double gamma = 0.5;
    const auto contraction_op = [gamma](const Vector& x, long) -> Vector {
        return gamma * x;
    };
    const long horizon = 5000;
    const auto traj =
        sa_driver(contraction_op, zero_noise, x0, StepSchedule{1.0, 3.0}, horizon, 1);
    double expected = 0.37;
    for (long t = 0; t < horizon; ++t)
        expected *= 1.0 - (1.0 - gamma) / (static_cast<double>(t) + 3.0);
    CHECK(std::abs(traj.x[0] - expected) <= 1e-9);
}

TEST_CASE("sa_driver bias plateau scales like eps/(1-gamma)") {
    const double gamma = 0.9;
    const auto contraction_op = [gamma](const Vector& x, long) -> Vector {
        return gamma * x;
    };
    double plateaus[2];
    const double biases[2] = {1e-2, 1e-3};
    for (int i = 0; i < 2; ++i) {
        const double eps = biases[i];
        const auto biased_noise = [eps](const Vector&, long, Rng&) {
            return Vector::Constant(1, eps);
        };
        const auto traj = sa_driver(contraction_op, biased_noise, Vector::Zero(1),
                                    StepSchedule{30.0, 30.0}, 20000, 1);
        plateaus[i] = std::abs(traj.x[0]);
        const double reference = eps / (1.0 - gamma);
        CHECK(plateaus[i] >= reference / 3.0);
        CHECK(plateaus[i] <= reference * 3.0);
    }
    CHECK(plateaus[0] / plateaus[1] == doctest::Approx(10.0).epsilon(0.2));
}

TEST_CASE("robust Bellman operator contracts in the surrogate semi-norm") {
    // Cross-module check with a contamination family on P1 (certificate-free
    // radius regime).
    const InducedChain p1(builtin_chain("P1"));
    Matrix rewards(5, 1);
    for (int s = 0; s < 5; ++s) rewards(s, 0) = s / 4.0;
    const TabularMdp mdp(rewards, Kernel{p1.matrix});
    const Policy policy = Policy::uniform(5, 1);
    const UncertaintySpec spec = UncertaintySpec::contamination(0.15);

    Rng rng(23);
    const auto family = sample_uncertainty_family(p1, spec, 20, rng);
    const ExtremalSurrogate sur = build_extremal_surrogate(family, 3, 25, 0.25, rng);

    Rng probe(29);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Vector v1(5), v2(5);
        for (int j = 0; j < 5; ++j) {
            v1[j] = probe.normal();
            v2[j] = probe.normal();
        }
        const double den = robust_seminorm_eval(sur, v1 - v2);
        if (den < 1e-9) continue;
        const Vector t1 = robust_bellman_exact(mdp, policy, v1, 0.2, spec);
        const Vector t2 = robust_bellman_exact(mdp, policy, v2, 0.2, spec);
        CHECK(robust_seminorm_eval(sur, t1 - t2) <= sur.gamma * den + 1e-9);
        ++checked;
    }
    CHECK(checked > 900);
}
