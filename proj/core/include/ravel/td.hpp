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

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ravel/mdp.hpp"
#include "ravel/mlmc.hpp"
#include "ravel/rng.hpp"
#include "ravel/uncertainty.hpp"

namespace ravel {

/// eta_t = c / (t + k). The abstract stepsize constants of the convergence
/// analysis are not observable, so both knobs are exposed directly.
struct StepSchedule {
    double c = 1.0;
    double k = 3.0;

    double at(long t) const { return c / (static_cast<double>(t) + k); }
};

struct TdConfig {
    long horizon = 0;
    StepSchedule value_step{1.0, 3.0};
    StepSchedule gain_step{1.0, 1.0};
    int anchor = 0;
    MlmcConfig mlmc;
    std::uint64_t seed = 0;
    /// Extra iteration indices to force into the error trace; the trace
    /// always contains the geometric checkpoints 1, 2, 4, ... and the final
    /// iterate.
    std::vector<long> trace_points;
};

struct TracePoint {
    long t = 0;
    double error = 0.0;
    long cumulative_samples = 0;
};

/// Robust Bellman operator with exact support functions, applied
/// coordinatewise without anchoring:
/// T_g(V)(s) = sum_a pi(a|s) [r(s,a) - g + sigma(V)].
Vector robust_bellman_exact(const TabularMdp& mdp, const Policy& policy, const Vector& v,
                            double g, const UncertaintySpec& spec);

/// Fixed point of the robust Bellman equation.
struct RobustFixedPoint {
    double g_star = 0.0;
    ValueFunction v_star;
    double residual = 0.0; // span of T_0(v*) - v*
    long iterations = 0;
};

/// Ground-truth solver: anchored relative value iteration with the exact
/// robust operator, h <- T_0(h) - T_0(h)(anchor) e, stopping when
/// span(T_0(h) - h) <= tol. g* is the midpoint of the final residual range.
/// Convergence rests on the semi-norm contraction of the operator; the
/// caller should consult radius_certificate first (the CLI warns but still
/// attempts the solve when the certificate fails).
RobustFixedPoint robust_rvi_oracle(const TabularMdp& mdp, const Policy& policy,
                                   const UncertaintySpec& spec, double tol, long max_iters,
                                   int anchor = 0);

struct ValuePhaseResult {
    ValueFunction v;
    std::vector<TracePoint> trace; // |V_t - V*|_inf when a reference is given
    long samples_consumed = 0;
};

/// Algorithm phase one: stochastic-approximation iteration on the value
/// function with the estimated operator at g = 0, re-anchored every step.
/// Estimator draws use per-(t, s, a) derived seeds, so the result does not
/// depend on evaluation order.
ValuePhaseResult td_value_phase(const TabularMdp& mdp, const Policy& policy,
                                const UncertaintySpec& spec, const TdConfig& cfg,
                                const ValueFunction* v_reference = nullptr);

struct GainPhaseResult {
    double g = 0.0;
    std::vector<TracePoint> trace; // |g_t - g*| when a reference is given
    long samples_consumed = 0;
};

/// Algorithm phase two: scalar stochastic approximation of the average
/// reward from fresh support estimates at the fixed value function.
GainPhaseResult td_gain_phase(const TabularMdp& mdp, const Policy& policy,
                              const UncertaintySpec& spec, const ValueFunction& v_fixed,
                              const TdConfig& cfg, const double* g_reference = nullptr);

/// Generic biased stochastic-approximation driver
///   x_{t+1} = x_t + eta_t (H(x_t) + w_t - x_t)
/// shared by the TD phases and the standalone plateau experiments.
struct SaResult {
    Vector x;
    std::vector<TracePoint> trace; // |x_t - x_ref|_inf when a reference is given
};

using SaOperator = std::function<Vector(const Vector&, long)>;
using SaNoise = std::function<Vector(const Vector&, long, Rng&)>;

SaResult sa_driver(const SaOperator& op, const SaNoise& noise, Vector x0,
                   const StepSchedule& steps, long horizon, std::uint64_t seed,
                   const Vector* x_reference = nullptr,
                   const std::vector<long>& trace_points = {});

} // namespace ravel
