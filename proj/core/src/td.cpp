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

#include "ravel/td.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace ravel {

namespace {

// Checkpoints 1, 2, 4, ... plus forced points and the horizon itself.
std::set<long> trace_schedule(long horizon, const std::vector<long>& forced) {
    std::set<long> points;
    for (long t = 1; t <= horizon; t *= 2) {
        points.insert(t);
        if (t > horizon / 2) break;
    }
    for (long t : forced)
        if (t >= 1 && t <= horizon) points.insert(t);
    if (horizon >= 1) points.insert(horizon);
    return points;
}

// Per-(s,a) samplers over the nominal kernel.
std::vector<std::vector<RowSampler>> make_samplers(const TabularMdp& mdp) {
    std::vector<std::vector<RowSampler>> samplers;
    samplers.reserve(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        std::vector<RowSampler> row;
        row.reserve(mdp.n_actions);
        for (int a = 0; a < mdp.n_actions; ++a)
            row.emplace_back(mdp.nominal_kernel[a].row(s).transpose());
        samplers.push_back(std::move(row));
    }
    return samplers;
}

// Stream tag separating the two phases' seed spaces.
constexpr std::uint64_t kValuePhaseTag = 0x76616c7565ull; // "value"
constexpr std::uint64_t kGainPhaseTag = 0x6761696eull;    // "gain"

} // namespace

Vector robust_bellman_exact(const TabularMdp& mdp, const Policy& policy, const Vector& v,
                            double g, const UncertaintySpec& spec) {
    if (v.size() != mdp.n_states)
        throw std::invalid_argument("robust_bellman_exact: dimension mismatch");
    Vector out = Vector::Zero(mdp.n_states);
    for (int s = 0; s < mdp.n_states; ++s) {
        double acc = 0.0;
        for (int a = 0; a < mdp.n_actions; ++a) {
            const double pi_sa = policy.probs(s, a);
            if (pi_sa == 0.0) continue;
            const Vector row = mdp.nominal_kernel[a].row(s).transpose();
            const double sigma = support_dispatch(row, v, spec).value;
            acc += pi_sa * (mdp.rewards(s, a) - g + sigma);
        }
        out[s] = acc;
    }
    return out;
}

RobustFixedPoint robust_rvi_oracle(const TabularMdp& mdp, const Policy& policy,
                                   const UncertaintySpec& spec, double tol, long max_iters,
                                   int anchor) {
    if (anchor < 0 || anchor >= mdp.n_states)
        throw std::invalid_argument("robust_rvi_oracle: anchor out of range");
    Vector h = Vector::Zero(mdp.n_states);
    double residual = std::numeric_limits<double>::infinity();
    for (long it = 1; it <= max_iters; ++it) {
        const Vector th = robust_bellman_exact(mdp, policy, h, 0.0, spec);
        const Vector diff = th - h;
        residual = span_seminorm(diff);
        if (residual <= tol) {
            RobustFixedPoint fp;
            fp.g_star = 0.5 * (diff.maxCoeff() + diff.minCoeff());
            Vector v = h;
            v.array() -= v[anchor];
            fp.v_star = ValueFunction{v, anchor};
            fp.residual = residual;
            fp.iterations = it;
            return fp;
        }
        h = th;
        h.array() -= h[anchor];
    }
    throw ConvergenceError("robust_rvi_oracle: max iterations exceeded", residual);
}

ValuePhaseResult td_value_phase(const TabularMdp& mdp, const Policy& policy,
                                const UncertaintySpec& spec, const TdConfig& cfg,
                                const ValueFunction* v_reference) {
    const int S = mdp.n_states;
    const int A = mdp.n_actions;
    if (cfg.anchor < 0 || cfg.anchor >= S)
        throw std::invalid_argument("td_value_phase: anchor out of range");
    const auto samplers = make_samplers(mdp);
    const auto checkpoints = trace_schedule(cfg.horizon, cfg.trace_points);
    const std::uint64_t phase_master = derive_seed(cfg.seed, kValuePhaseTag);

    ValuePhaseResult result;
    Vector v = Vector::Zero(S); // V_0 = 0, g_0 = 0 per the algorithm
    const double g0 = 0.0;
    long samples = 0;

    for (long t = 0; t < cfg.horizon; ++t) {
        Vector operator_estimate = Vector::Zero(S);
        for (int s = 0; s < S; ++s) {
            double acc = 0.0;
            for (int a = 0; a < A; ++a) {
                const double pi_sa = policy.probs(s, a);
                Rng rng(derive_seed(phase_master,
                                    static_cast<std::uint64_t>(t) * (S * A) +
                                        static_cast<std::uint64_t>(s) * A + a));
                double sigma_hat;
                if (spec.kind == UncertaintyKind::Contamination) {
                    sigma_hat =
                        estimate_support_contamination(samplers[s][a], v, spec.delta, rng);
                    samples += 1;
                } else {
                    const MlmcEstimate est =
                        estimate_support_mlmc(samplers[s][a], v, spec, cfg.mlmc, rng);
                    sigma_hat = est.value;
                    samples += est.samples_used;
                }
                acc += pi_sa * (mdp.rewards(s, a) - g0 + sigma_hat);
            }
            operator_estimate[s] = acc;
        }
        const double eta = cfg.value_step.at(t);
        v += eta * (operator_estimate - v);
        v.array() -= v[cfg.anchor];

        const long done = t + 1;
        if (v_reference && checkpoints.count(done)) {
            const double err = (v - v_reference->values).lpNorm<Eigen::Infinity>();
            result.trace.push_back({done, err, samples});
        }
    }
    result.v = ValueFunction{v, cfg.anchor};
    result.samples_consumed = samples;
    return result;
}

GainPhaseResult td_gain_phase(const TabularMdp& mdp, const Policy& policy,
                              const UncertaintySpec& spec, const ValueFunction& v_fixed,
                              const TdConfig& cfg, const double* g_reference) {
    const int S = mdp.n_states;
    const int A = mdp.n_actions;
    if (v_fixed.values.size() != S)
        throw std::invalid_argument("td_gain_phase: value function dimension mismatch");
    const auto samplers = make_samplers(mdp);
    const auto checkpoints = trace_schedule(cfg.horizon, cfg.trace_points);
    const std::uint64_t phase_master = derive_seed(cfg.seed, kGainPhaseTag);
    const Vector& v = v_fixed.values;

    GainPhaseResult result;
    double g = 0.0;
    long samples = 0;

    for (long t = 0; t < cfg.horizon; ++t) {
        double residual_sum = 0.0;
        for (int s = 0; s < S; ++s) {
            double acc = 0.0;
            for (int a = 0; a < A; ++a) {
                const double pi_sa = policy.probs(s, a);
                Rng rng(derive_seed(phase_master,
                                    static_cast<std::uint64_t>(t) * (S * A) +
                                        static_cast<std::uint64_t>(s) * A + a));
                double sigma_hat;
                if (spec.kind == UncertaintyKind::Contamination) {
                    sigma_hat =
                        estimate_support_contamination(samplers[s][a], v, spec.delta, rng);
                    samples += 1;
                } else {
                    const MlmcEstimate est =
                        estimate_support_mlmc(samplers[s][a], v, spec, cfg.mlmc, rng);
                    sigma_hat = est.value;
                    samples += est.samples_used;
                }
                acc += pi_sa * (mdp.rewards(s, a) + sigma_hat);
            }
            residual_sum += acc - v[s];
        }
        const double delta_bar = residual_sum / S;
        g += cfg.gain_step.at(t) * (delta_bar - g);

        const long done = t + 1;
        if (g_reference && checkpoints.count(done))
            result.trace.push_back({done, std::abs(g - *g_reference), samples});
    }
    result.g = g;
    result.samples_consumed = samples;
    return result;
}

SaResult sa_driver(const SaOperator& op, const SaNoise& noise, Vector x0,
                   const StepSchedule& steps, long horizon, std::uint64_t seed,
                   const Vector* x_reference, const std::vector<long>& trace_points) {
    const auto checkpoints = trace_schedule(horizon, trace_points);
    SaResult result;
    Vector x = std::move(x0);
    Rng rng(seed);
    for (long t = 0; t < horizon; ++t) {
        const Vector target = op(x, t) + noise(x, t, rng);
        x += steps.at(t) * (target - x);
        const long done = t + 1;
        if (x_reference && checkpoints.count(done)) {
            const double err = (x - *x_reference).lpNorm<Eigen::Infinity>();
            result.trace.push_back({done, err, done});
        }
    }
    result.x = std::move(x);
    return result;
}

} // namespace ravel
