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

#include "ravel/mdp.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace ravel {

namespace {

void require_row_stochastic(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument(std::string(what) + ": empty matrix");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) < -kStochasticTol)
                throw std::invalid_argument(std::string(what) + ": negative entry");
            sum += m(i, j);
        }
        if (std::abs(sum - 1.0) > kStochasticTol)
            throw std::invalid_argument(std::string(what) + ": row does not sum to 1");
    }
}

// Adjacency pattern with bit-packed rows; products over the (or, and) semiring.
struct BoolMatrix {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> rows; // n * words

    explicit BoolMatrix(int n_in) : n(n_in), words((n_in + 63) / 64), rows(n_in * words, 0) {}
    void set(int i, int j) { rows[i * words + (j >> 6)] |= std::uint64_t(1) << (j & 63); }
    bool get(int i, int j) const {
        return (rows[i * words + (j >> 6)] >> (j & 63)) & 1;
    }
    bool all_true() const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!get(i, j)) return false;
        return true;
    }
};

BoolMatrix bool_mul(const BoolMatrix& a, const BoolMatrix& b) {
    BoolMatrix c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k)
            if (a.get(i, k))
                for (int w = 0; w < c.words; ++w)
                    c.rows[i * c.words + w] |= b.rows[k * b.words + w];
    return c;
}

} // namespace

TabularMdp::TabularMdp(Matrix rewards_in, Kernel kernel_in, double reward_cap_in)
    : rewards(std::move(rewards_in)), nominal_kernel(std::move(kernel_in)),
      reward_cap(reward_cap_in) {
    n_states = static_cast<int>(rewards.rows());
    n_actions = static_cast<int>(rewards.cols());
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("TabularMdp: need at least one state and action");
    if (reward_cap <= 0.0)
        throw std::invalid_argument("TabularMdp: reward cap must be positive");
    if (static_cast<int>(nominal_kernel.size()) != n_actions)
        throw std::invalid_argument("TabularMdp: kernel must have one matrix per action");
    for (int a = 0; a < n_actions; ++a) {
        if (nominal_kernel[a].rows() != n_states || nominal_kernel[a].cols() != n_states)
            throw std::invalid_argument("TabularMdp: kernel matrix shape mismatch");
        require_row_stochastic(nominal_kernel[a], "TabularMdp kernel");
    }
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a)
            if (rewards(s, a) < 0.0 || rewards(s, a) > reward_cap)
                throw std::invalid_argument("TabularMdp: reward outside [0, cap]");
}

Policy::Policy(Matrix probs_in) : probs(std::move(probs_in)) {
    require_row_stochastic(probs, "Policy");
}

Policy Policy::uniform(int n_states, int n_actions) {
    return Policy(Matrix::Constant(n_states, n_actions, 1.0 / n_actions));
}

InducedChain::InducedChain(Matrix m) : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("InducedChain: matrix must be square");
    require_row_stochastic(matrix, "InducedChain");
}

InducedChain induced_kernel(const Kernel& kernel, const Policy& policy) {
    if (kernel.empty()) throw std::invalid_argument("induced_kernel: empty kernel");
    const int s_count = static_cast<int>(kernel[0].rows());
    const int a_count = static_cast<int>(kernel.size());
    if (policy.probs.rows() != s_count || policy.probs.cols() != a_count)
        throw std::invalid_argument("induced_kernel: policy shape mismatch");
    Matrix m = Matrix::Zero(s_count, s_count);
    for (int a = 0; a < a_count; ++a)
        m += policy.probs.col(a).asDiagonal() * kernel[a];
    return InducedChain(m);
}

InducedChain induced_kernel(const TabularMdp& mdp, const Policy& policy) {
    return induced_kernel(mdp.nominal_kernel, policy);
}

bool is_ergodic(const InducedChain& chain) {
    const int n = chain.n_states();
    if (n == 1) return true;
    BoolMatrix adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (chain.matrix(i, j) > 0.0) adj.set(i, j);
    // P is primitive iff P^w is entrywise positive at the Wielandt exponent
    // w = n^2 - 2n + 2. Positivity persists under further powering (every row
    // of a stochastic pattern is nonempty), so squaring past w is sufficient.
    const long w = static_cast<long>(n) * n - 2L * n + 2L;
    long e = 1;
    while (e < w) {
        if (adj.all_true()) return true;
        adj = bool_mul(adj, adj);
        e *= 2;
    }
    return adj.all_true();
}

Vector stationary_distribution(const InducedChain& chain) {
    if (!is_ergodic(chain))
        throw NonErgodicError("stationary_distribution: chain is not irreducible and aperiodic");
    const int n = chain.n_states();
    Matrix a = chain.matrix.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Vector b = Vector::Zero(n);
    b[n - 1] = 1.0;
    Vector d = a.partialPivLu().solve(b);
    // Clamp tiny negative round-off and renormalize.
    for (int i = 0; i < n; ++i) d[i] = std::max(d[i], 0.0);
    d /= d.sum();
    const double residual = (chain.matrix.transpose() * d - d).lpNorm<1>();
    if (residual > 1e-10)
        throw ConvergenceError("stationary_distribution: residual too large", residual);
    return d;
}

double average_reward(const TabularMdp& mdp, const Policy& policy, const Kernel& kernel) {
    const InducedChain chain = induced_kernel(kernel, policy);
    const Vector d = stationary_distribution(chain);
    const Vector r_pi = (mdp.rewards.array() * policy.probs.array()).rowwise().sum();
    return d.dot(r_pi);
}

ValueFunction relative_value_function(const TabularMdp& mdp, const Policy& policy,
                                      const Kernel& kernel, int anchor) {
    const int n = mdp.n_states;
    if (anchor < 0 || anchor >= n)
        throw std::invalid_argument("relative_value_function: anchor out of range");
    const InducedChain chain = induced_kernel(kernel, policy);
    const double g = average_reward(mdp, policy, kernel);
    const Vector r_pi = (mdp.rewards.array() * policy.probs.array()).rowwise().sum();

    // (I - P) V = r - g e  plus the anchoring row V(anchor) = 0.
    Matrix a(n + 1, n);
    a.topRows(n) = Matrix::Identity(n, n) - chain.matrix;
    a.row(n).setZero();
    a(n, anchor) = 1.0;
    Vector b(n + 1);
    b.head(n) = r_pi - Vector::Constant(n, g);
    b[n] = 0.0;
    Vector v = a.colPivHouseholderQr().solve(b);
    v.array() -= v[anchor]; // exact anchoring after round-off

    const Vector bellman = r_pi - Vector::Constant(n, g) + chain.matrix * v;
    const double residual = (v - bellman).lpNorm<Eigen::Infinity>();
    if (residual > 1e-10)
        throw ConvergenceError("relative_value_function: Bellman residual too large", residual);
    return ValueFunction{v, anchor};
}

long mixing_time(const InducedChain& chain, long max_steps) {
    const Vector d = stationary_distribution(chain); // also checks ergodicity
    Matrix power = chain.matrix;
    for (long t = 1; t <= max_steps; ++t) {
        double worst = 0.0;
        for (int i = 0; i < chain.n_states(); ++i)
            worst = std::max(worst, (power.row(i).transpose() - d).lpNorm<1>());
        if (worst <= 0.5) return t;
        power = power * chain.matrix;
    }
    throw ConvergenceError("mixing_time: iteration cap exceeded", 0.5);
}

double span_seminorm(const Vector& v) {
    if (v.size() == 0) throw std::invalid_argument("span_seminorm: empty vector");
    return v.maxCoeff() - v.minCoeff();
}

} // namespace ravel
