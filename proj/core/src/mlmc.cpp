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

#include "ravel/mlmc.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "ravel/parallel.hpp"

namespace ravel {

namespace {

double exact_support(const Vector& p, const Vector& v, const UncertaintySpec& spec) {
    switch (spec.kind) {
        case UncertaintyKind::TotalVariation:
            return support_tv_greedy(p, v, spec.delta).value;
        case UncertaintyKind::Wasserstein:
            return support_wasserstein(p, v, spec.delta, spec.metric, spec.power).value;
        case UncertaintyKind::Contamination:
            return support_contamination(p, v, spec.delta).value;
    }
    throw std::logic_error("exact_support: unreachable");
}

Vector counts_to_distribution(const std::map<int, long>& counts, int n, long total) {
    Vector p = Vector::Zero(n);
    for (const auto& [state, count] : counts)
        p[state] = static_cast<double>(count) / static_cast<double>(total);
    return p;
}

} // namespace

RowSampler::RowSampler(Vector probs) : probs_(std::move(probs)) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
        if (probs_[i] < -1e-12)
            throw std::invalid_argument("RowSampler: negative probability");
        sum += probs_[i];
    }
    if (probs_.size() == 0 || std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("RowSampler: row does not sum to 1");
}

int RowSampler::draw(Rng& rng) const { return rng.discrete(probs_); }

int sample_truncated_geometric(const MlmcConfig& cfg, Rng& rng) {
    if (cfg.n_max < 0 || cfg.n_max > 30)
        throw std::invalid_argument("MlmcConfig: n_max must lie in [0, 30]");
    return std::min(rng.geometric_half(), cfg.n_max);
}

MlmcEstimate estimate_support_mlmc(const TransitionSampler& sampler, const Vector& v,
                                   const UncertaintySpec& spec, const MlmcConfig& cfg,
                                   Rng& rng) {
    if (spec.kind == UncertaintyKind::Contamination)
        throw std::invalid_argument(
            "estimate_support_mlmc: contamination uses the one-sample estimator");
    const int n = sampler.n_states();
    if (v.size() != n) throw std::invalid_argument("estimate_support_mlmc: dimension mismatch");

    const int level = sample_truncated_geometric(cfg, rng);
    const long m = 1L << (level + 1);

    // Sparse count maps: the batch can be far smaller or far larger than S.
    std::map<int, long> all, even, odd;
    int first = -1;
    for (long i = 1; i <= m; ++i) {
        const int s = sampler.draw(rng);
        if (i == 1) first = s;
        ++all[s];
        if (i % 2 == 0)
            ++even[s];
        else
            ++odd[s];
    }

    const Vector p_all = counts_to_distribution(all, n, m);
    const Vector p_even = counts_to_distribution(even, n, m / 2);
    const Vector p_odd = counts_to_distribution(odd, n, m / 2);
    Vector p_first = Vector::Zero(n);
    p_first[first] = 1.0;

    const double sigma_all = exact_support(p_all, v, spec);
    const double sigma_even = exact_support(p_even, v, spec);
    const double sigma_odd = exact_support(p_odd, v, spec);
    const double sigma_first = exact_support(p_first, v, spec);

    const double correction = sigma_all - 0.5 * (sigma_even + sigma_odd);
    const double level_prob =
        (level < cfg.n_max) ? std::ldexp(1.0, -(level + 1)) : std::ldexp(1.0, -cfg.n_max);

    MlmcEstimate est;
    est.value = sigma_first + correction / level_prob;
    est.level = level;
    est.samples_used = m;
    return est;
}

double estimate_support_contamination(const TransitionSampler& sampler, const Vector& v,
                                      double delta, Rng& rng) {
    if (delta < 0.0 || delta >= 1.0)
        throw std::invalid_argument(
            "estimate_support_contamination: radius must lie in [0, 1)");
    const int next = sampler.draw(rng);
    return (1.0 - delta) * v[next] + delta * v.minCoeff();
}

MlmcReport mlmc_statistics(const RowSampler& sampler, const Vector& v,
                           const UncertaintySpec& spec, const MlmcConfig& cfg,
                           long replications, Rng& rng, int n_threads) {
    if (replications < 1)
        throw std::invalid_argument("mlmc_statistics: replications must be positive");
    const std::uint64_t master = rng.next_u64();

    struct Cell {
        double value = 0.0;
        long samples = 0;
    };
    const auto cells = parallel_map<Cell>(replications, n_threads, [&](std::int64_t i) {
        Rng local(derive_seed(master, static_cast<std::uint64_t>(i)));
        Cell cell;
        if (spec.kind == UncertaintyKind::Contamination) {
            cell.value = estimate_support_contamination(sampler, v, spec.delta, local);
            cell.samples = 1;
        } else {
            const MlmcEstimate est = estimate_support_mlmc(sampler, v, spec, cfg, local);
            cell.value = est.value;
            cell.samples = est.samples_used;
        }
        return cell;
    });

    double sum = 0.0, sum_sq = 0.0;
    long samples = 0;
    for (const Cell& c : cells) {
        sum += c.value;
        sum_sq += c.value * c.value;
        samples += c.samples;
    }
    const double r = static_cast<double>(replications);
    const double mean = sum / r;

    MlmcReport report;
    report.replications = replications;
    report.mean_samples = static_cast<double>(samples) / r;
    report.sigma_exact = exact_support(sampler.distribution(), v, spec);
    report.mean_estimate = mean;
    report.empirical_bias = std::abs(mean - report.sigma_exact);
    report.empirical_variance =
        replications > 1 ? std::max(0.0, (sum_sq - r * mean * mean) / (r - 1.0)) : 0.0;
    return report;
}

} // namespace ravel
