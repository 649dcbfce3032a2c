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

#include "ravel/mlmc.hpp"
#include "ravel/rng.hpp"
#include "ravel/uncertainty.hpp"

using namespace ravel;

namespace {

Vector vec3(double a, double b, double c) {
    Vector v(3);
    v << a, b, c;
    return v;
}

} // namespace

TEST_CASE("truncated geometric pmf at n_max = 3") {
    Rng rng(1);
    const MlmcConfig cfg{3};
    const long n = 1000000;
    long counts[4] = {0, 0, 0, 0};
    for (long i = 0; i < n; ++i) ++counts[sample_truncated_geometric(cfg, rng)];
    const double expected[4] = {0.5, 0.25, 0.125, 0.125};
    for (int k = 0; k < 4; ++k) {
        const double sigma = std::sqrt(expected[k] * (1 - expected[k]) / n);
        CHECK(std::abs(counts[k] / static_cast<double>(n) - expected[k]) <= 3 * sigma);
    }
}

TEST_CASE("truncated geometric degenerates at n_max = 0") {
    Rng rng(2);
    const MlmcConfig cfg{0};
    for (int i = 0; i < 1000; ++i) CHECK(sample_truncated_geometric(cfg, rng) == 0);
}

TEST_CASE("truncated geometric empirical pmf at n_max = 5 within 3-sigma bands") {
    Rng rng(3);
    const MlmcConfig cfg{5};
    const long n = 1000000;
    long counts[6] = {0, 0, 0, 0, 0, 0};
    for (long i = 0; i < n; ++i) ++counts[sample_truncated_geometric(cfg, rng)];
    for (int k = 0; k <= 5; ++k) {
        const double expected = (k < 5) ? std::ldexp(1.0, -(k + 1)) : std::ldexp(1.0, -5);
        const double sigma = std::sqrt(expected * (1 - expected) / n);
        CHECK(std::abs(counts[k] / static_cast<double>(n) - expected) <= 3 * sigma);
    }
}

TEST_CASE("point-mass kernels make the estimator exact") {
    const RowSampler sampler(vec3(0, 1, 0));
    const Vector v = vec3(0.9, 0.2, 0.6);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.25);
    const double sigma = support_tv_greedy(vec3(0, 1, 0), v, 0.25).value;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const MlmcEstimate est = estimate_support_mlmc(sampler, v, spec, MlmcConfig{8}, rng);
        CHECK(est.value == doctest::Approx(sigma).epsilon(1e-12));
        CHECK(est.samples_used == (1L << (est.level + 1)));
    }
}

TEST_CASE("constant value vectors estimate the constant") {
    const RowSampler sampler(vec3(0.5, 0.3, 0.2));
    const Vector v = Vector::Constant(3, 0.7);
    Rng rng(7);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    for (int i = 0; i < 200; ++i) {
        const MlmcEstimate est = estimate_support_mlmc(sampler, v, spec, MlmcConfig{6}, rng);
        CHECK(est.value == doctest::Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("contamination path is rejected by the MLMC estimator") {
    const RowSampler sampler(vec3(0.5, 0.3, 0.2));
    Rng rng(8);
    CHECK_THROWS_AS(estimate_support_mlmc(sampler, vec3(1, 0.4, 0),
                                          UncertaintySpec::contamination(0.2), MlmcConfig{4},
                                          rng),
                    std::invalid_argument);
}

TEST_CASE("estimator mean matches the exact support value (TV)") {
    const Vector p = vec3(0.5, 0.3, 0.2);
    const RowSampler sampler(p);
    const Vector v = vec3(1.0, 0.4, 0.0);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    const double sigma = support_tv_greedy(p, v, 0.2).value;

    Rng rng(11);
    const long reps = 200000;
    const MlmcReport report =
        mlmc_statistics(sampler, v, spec, MlmcConfig{12}, reps, rng, 2);
    const double se = std::sqrt(report.empirical_variance / reps);
    CHECK(std::abs(report.mean_estimate - sigma) <= 3 * se);
}

TEST_CASE("one-sample contamination estimator") {
    SUBCASE("point mass is exact") {
        const RowSampler sampler(vec3(0, 0, 1));
        const Vector v = vec3(0.8, 0.1, 0.5);
        Rng rng(13);
        const double expected = (1 - 0.3) * 0.5 + 0.3 * 0.1;
        for (int i = 0; i < 100; ++i)
            CHECK(estimate_support_contamination(sampler, v, 0.3, rng) ==
                  doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("constant v returns the constant") {
        const RowSampler sampler(vec3(0.5, 0.3, 0.2));
        Rng rng(15);
        for (int i = 0; i < 100; ++i)
            CHECK(estimate_support_contamination(sampler, Vector::Constant(3, 0.4), 0.2,
                                                 rng) == doctest::Approx(0.4));
    }
    SUBCASE("mean matches the closed form on a random row") {
        Rng rng(17);
        const Vector p = rng.simplex(4);
        Vector v(4);
        for (int i = 0; i < 4; ++i) v[i] = rng.u01();
        const RowSampler sampler(p);
        const double sigma = support_contamination(p, v, 0.25).value;
        const long reps = 100000;
        Rng stats_rng(19);
        const MlmcReport report = mlmc_statistics(
            sampler, v, UncertaintySpec::contamination(0.25), MlmcConfig{0}, reps,
            stats_rng, 2);
        const double se = std::sqrt(report.empirical_variance / reps);
        CHECK(std::abs(report.mean_estimate - sigma) <= 3 * se);
        CHECK(report.mean_samples == doctest::Approx(1.0));
    }
}

TEST_CASE("expected sample count is n_max + 2 within 1%") {
    const RowSampler sampler(vec3(0.5, 0.3, 0.2));
    const Vector v = vec3(1.0, 0.4, 0.0);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
    for (const int n_max : {3, 10}) {
        Rng rng(100 + n_max);
        const MlmcReport report =
            mlmc_statistics(sampler, v, spec, MlmcConfig{n_max}, 400000, rng, 2);
        CHECK(std::abs(report.mean_samples - (n_max + 2.0)) <= 0.01 * (n_max + 2.0));
    }
}

TEST_CASE("bias shrinks with the truncation level (TV and Wasserstein)") {
    Rng inst_rng(23);
    for (int kind = 0; kind < 2; ++kind) {
        double bias_low_total = 0.0, bias_high_total = 0.0;
        for (int inst = 0; inst < 8; ++inst) {
            const int n = 3 + static_cast<int>(inst_rng.uniform_index(3));
            const Vector p = inst_rng.simplex(n);
            Vector v(n);
            for (int i = 0; i < n; ++i) v[i] = inst_rng.u01();
            UncertaintySpec spec = UncertaintySpec::total_variation(0.2);
            if (kind == 1) {
                Matrix metric(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) metric(i, j) = std::abs(i - j);
                spec = UncertaintySpec::wasserstein(0.5, metric, 1.0);
            }
            const RowSampler sampler(p);
            const long reps = (kind == 0) ? 60000 : 20000;
            Rng lo(inst * 2 + 1), hi(inst * 2 + 2);
            bias_low_total +=
                mlmc_statistics(sampler, v, spec, MlmcConfig{2}, reps, lo, 2).empirical_bias;
            bias_high_total +=
                mlmc_statistics(sampler, v, spec, MlmcConfig{8}, reps, hi, 2).empirical_bias;
        }
        CHECK(bias_high_total < bias_low_total);
    }
}

TEST_CASE("variance grows at most linearly under the stated envelope") {
    const Vector p = vec3(0.5, 0.3, 0.2);
    const RowSampler sampler(p);
    const Vector v = vec3(1.0, 0.4, 0.0);
    const double delta = 0.2;
    const UncertaintySpec spec = UncertaintySpec::total_variation(delta);
    const double span = 1.0;
    const double envelope = 144.0 * std::pow(1.0 + 1.0 / delta, 2.0) * span * span;

    std::vector<double> xs, ys;
    for (const int n_max : {2, 4, 8, 12}) {
        Rng rng(31 + n_max);
        ys.push_back(mlmc_statistics(sampler, v, spec, MlmcConfig{n_max}, 60000, rng, 2)
                         .empirical_variance);
        xs.push_back(n_max);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double cov = 0, var = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        var += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = cov / var;
    CHECK(slope <= envelope);
}

TEST_CASE("identical seeds give bit-identical estimates for any worker count") {
    const Vector p = vec3(0.5, 0.3, 0.2);
    const RowSampler sampler(p);
    const Vector v = vec3(1.0, 0.4, 0.0);
    const UncertaintySpec spec = UncertaintySpec::total_variation(0.2);

    Rng a(99), b(99);
    const MlmcEstimate ea = estimate_support_mlmc(sampler, v, spec, MlmcConfig{6}, a);
    const MlmcEstimate eb = estimate_support_mlmc(sampler, v, spec, MlmcConfig{6}, b);
    CHECK(ea.value == eb.value);
    CHECK(ea.level == eb.level);

    Rng s1(7), s4(7);
    const MlmcReport r1 = mlmc_statistics(sampler, v, spec, MlmcConfig{6}, 20000, s1, 1);
    const MlmcReport r4 = mlmc_statistics(sampler, v, spec, MlmcConfig{6}, 20000, s4, 4);
    CHECK(r1.mean_estimate == r4.mean_estimate);
    CHECK(r1.empirical_variance == r4.empirical_variance);
    CHECK(r1.mean_samples == r4.mean_samples);
}
