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

#include "ravel/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "ravel/errors.hpp"

namespace ravel {

Matrix cyclic_shift(int n) {
    if (n <= 0) throw std::invalid_argument("cyclic_shift: n must be positive");
    Matrix s = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) s(i, (i + 1) % n) = 1.0;
    return s;
}

Matrix cyclic_mix(int n, const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("cyclic_mix: empty coefficients");
    double sum = 0.0;
    for (double c : coeffs) {
        if (c < 0.0) throw std::invalid_argument("cyclic_mix: negative coefficient");
        sum += c;
    }
    if (std::abs(sum - 1.0) > kStochasticTol)
        throw std::invalid_argument("cyclic_mix: coefficients must sum to 1");
    const Matrix s = cyclic_shift(n);
    Matrix power = Matrix::Identity(n, n);
    Matrix result = Matrix::Zero(n, n);
    for (double c : coeffs) {
        result += c * power;
        power = power * s;
    }
    return result;
}

Matrix builtin_chain(const std::string& label) {
    if (label == "P1") return cyclic_mix(5, {0.5, 0.5});
    if (label == "P2") return cyclic_mix(6, {0.6, 0.4});
    if (label == "P3") return cyclic_mix(7, {0.55, 0.45});
    if (label == "P4") return cyclic_mix(8, {0.6, 0.3, 0.1});
    throw ConfigError("unknown built-in chain label: " + label);
}

TabularMdp dirichlet_mdp(int n_states, int n_actions, double concentration, Rng& rng) {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("dirichlet_mdp: dimensions must be positive");
    if (concentration <= 0.0)
        throw std::invalid_argument("dirichlet_mdp: concentration must be positive");
    Kernel kernel(n_actions, Matrix::Zero(n_states, n_states));
    for (int a = 0; a < n_actions; ++a)
        for (int s = 0; s < n_states; ++s) {
            Vector row(n_states);
            for (int j = 0; j < n_states; ++j) row[j] = rng.gamma(concentration);
            kernel[a].row(s) = (row / row.sum()).transpose();
        }
    Matrix rewards(n_states, n_actions);
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) rewards(s, a) = rng.u01();
    return TabularMdp(rewards, kernel);
}

Matrix random_ergodic_chain(int n_states, double concentration, Rng& rng) {
    // Dirichlet rows are strictly positive almost surely, hence primitive.
    for (int attempt = 0; attempt < 100; ++attempt) {
        Matrix m(n_states, n_states);
        for (int s = 0; s < n_states; ++s) {
            Vector row(n_states);
            for (int j = 0; j < n_states; ++j) row[j] = rng.gamma(concentration);
            m.row(s) = (row / row.sum()).transpose();
        }
        if (is_ergodic(InducedChain(m))) return m;
    }
    throw std::runtime_error("random_ergodic_chain: could not draw an ergodic chain");
}

} // namespace ravel
