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
#include <Eigen/Dense>

namespace ravel {

/// Counter-based SplitMix64 generator.
///
/// Every stochastic component of the toolkit draws from this generator so
/// that results are reproducible across platforms and independent of any
/// standard-library distribution implementation. The state advances by the
/// 64-bit golden-ratio constant and each output is a finalized mix of the
/// state, so seeding with derive_seed(master, stream) yields decorrelated
/// streams.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal via Box-Muller (two u01 draws per call).
    double normal();

    /// Exponential with unit rate.
    double exponential();

    /// Gamma(shape) with unit scale, Marsaglia-Tsang with shape<1 boost.
    double gamma(double shape);

    /// Number of failures before the first success of a fair coin,
    /// i.e. P(N = n) = 2^{-(n+1)} for n = 0,1,2,...  Exact (bit counting).
    int geometric_half();

    /// Index draw from an explicit probability vector via CDF inversion.
    int discrete(const Eigen::VectorXd& probs);

    /// Uniform point on the probability simplex (normalized exponentials).
    Eigen::VectorXd simplex(int n);

    /// Uniform direction on the Euclidean unit sphere.
    Eigen::VectorXd unit_sphere(int n);

  private:
    std::uint64_t state_;
};

/// Stream derivation: hash(master, stream_id). Any (master, stream) pair maps
/// to a seed whose SplitMix64 stream is effectively independent of others.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

} // namespace ravel
