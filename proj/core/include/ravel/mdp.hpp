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

#include <vector>
#include <Eigen/Dense>

#include "ravel/errors.hpp"

namespace ravel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Transition tensor indexed by action: kernel[a](s, s') = P(s' | s, a).
using Kernel = std::vector<Matrix>;

constexpr double kStochasticTol = 1e-12;

/// Finite state/action model with a nominal kernel and bounded rewards.
///
/// Rewards must lie in [0, reward_cap] (default cap 1; the cap is a
/// normalization choice, exposed for callers that work on a different scale).
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    Matrix rewards;        // S x A
    Kernel nominal_kernel; // A matrices, each S x S row-stochastic
    double reward_cap = 1.0;

    TabularMdp() = default;
    TabularMdp(Matrix rewards_in, Kernel kernel_in, double reward_cap_in = 1.0);
};

/// Stationary randomized policy, probs(s, a) = pi(a | s).
struct Policy {
    Matrix probs;

    Policy() = default;
    explicit Policy(Matrix probs_in);

    static Policy uniform(int n_states, int n_actions);
};

/// Row-stochastic state-to-state matrix of the chain a policy induces.
struct InducedChain {
    Matrix matrix;

    InducedChain() = default;
    explicit InducedChain(Matrix m);

    int n_states() const { return static_cast<int>(matrix.rows()); }
};

/// Real vector over states with an anchored-state convention: when a value
/// function is produced in anchored form, values[anchor] == 0.
struct ValueFunction {
    Vector values;
    int anchor = 0;
};

/// Chain induced by policy on the MDP's nominal kernel:
/// result(s, s') = sum_a pi(a|s) P(s'|s,a).
InducedChain induced_kernel(const TabularMdp& mdp, const Policy& policy);

/// Same contraction over an explicit kernel (not necessarily the nominal).
InducedChain induced_kernel(const Kernel& kernel, const Policy& policy);

/// True iff the chain is irreducible and aperiodic. Decided exactly by
/// boolean matrix powering up to the Wielandt exponent S^2 - 2S + 2.
bool is_ergodic(const InducedChain& chain);

/// Unique stationary distribution of an ergodic chain, computed from the
/// linear system (P^T - I with one row replaced by the normalization).
/// Throws NonErgodicError when the chain is not ergodic.
Vector stationary_distribution(const InducedChain& chain);

/// Long-run average reward of the policy under an explicit kernel.
double average_reward(const TabularMdp& mdp, const Policy& policy, const Kernel& kernel);

/// Relative value function: solves V = r^pi - g e + P^pi V with V(anchor) = 0
/// via the (S+1)-row least-squares system (Bellman rows plus anchor row).
ValueFunction relative_value_function(const TabularMdp& mdp, const Policy& policy,
                                      const Kernel& kernel, int anchor);

/// Smallest t >= 1 such that every row of P^t is within total variation 1/2
/// of the stationary distribution. Vertex initial distributions suffice since
/// the maximum over initial laws is attained at a vertex.
long mixing_time(const InducedChain& chain, long max_steps = 1000000);

/// max(v) - min(v).
double span_seminorm(const Vector& v);

} // namespace ravel
