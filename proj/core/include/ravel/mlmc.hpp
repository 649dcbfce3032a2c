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

#include "ravel/mdp.hpp"
#include "ravel/rng.hpp"
#include "ravel/uncertainty.hpp"

namespace ravel {

/// Truncation level for the geometric-level estimator. The geometric
/// parameter is fixed at 1/2: the finite-expected-sample-count argument
/// depends on exactly that value, so it is not a knob.
struct MlmcConfig {
    int n_max = 8;
};

/// One estimator draw plus its sample accounting: samples_used = 2^{level+1}.
struct MlmcEstimate {
    double value = 0.0;
    int level = 0;
    long samples_used = 0;
};

/// Source of i.i.d. next-state draws for one (s, a) pair of the nominal
/// model. Estimators only ever call draw(); the exact distribution is
/// exposed for reporting and oracle code, not for the estimators.
class TransitionSampler {
  public:
    virtual ~TransitionSampler() = default;
    virtual int draw(Rng& rng) const = 0;
    virtual int n_states() const = 0;
};

/// Sampler backed by an explicit probability row.
class RowSampler final : public TransitionSampler {
  public:
    explicit RowSampler(Vector probs);

    int draw(Rng& rng) const override;
    int n_states() const override { return static_cast<int>(probs_.size()); }
    const Vector& distribution() const { return probs_; }

  private:
    Vector probs_;
};

/// Truncated level draw: P(N' = n) = 2^{-(n+1)} for n < n_max and
/// P(N' = n_max) = 2^{-n_max}. Implemented as Geom(1/2) on {0,1,...} capped
/// at n_max.
int sample_truncated_geometric(const MlmcConfig& cfg, Rng& rng);

/// Truncated multi-level Monte Carlo estimator of the support function for
/// TV and Wasserstein balls. Draws N', collects 2^{N'+1} next states, forms
/// the even / odd / full / first-sample empirical distributions, evaluates
/// the exact support solver on each, and returns
///   sigma(first) + [sigma(full) - (sigma(even) + sigma(odd)) / 2] / P(N'=n).
/// Contamination centers use the one-sample path instead; passing one here
/// is an error.
MlmcEstimate estimate_support_mlmc(const TransitionSampler& sampler, const Vector& v,
                                   const UncertaintySpec& spec, const MlmcConfig& cfg,
                                   Rng& rng);

/// One-sample unbiased estimator for contamination:
/// (1 - delta) v(s') + delta min(v).
double estimate_support_contamination(const TransitionSampler& sampler, const Vector& v,
                                      double delta, Rng& rng);

/// Replicated-run summary for the estimator on one (s, a) row.
struct MlmcReport {
    double mean_samples = 0.0;
    double empirical_bias = 0.0;
    double empirical_variance = 0.0;
    double sigma_exact = 0.0;
    double mean_estimate = 0.0;
    long replications = 0;
};

/// Runs `replications` independent estimates with per-replication derived
/// seeds (deterministic for any thread count) and aggregates the sample
/// accounting, bias against the exact solver, and variance.
MlmcReport mlmc_statistics(const RowSampler& sampler, const Vector& v,
                           const UncertaintySpec& spec, const MlmcConfig& cfg,
                           long replications, Rng& rng, int n_threads = 1);

} // namespace ravel
