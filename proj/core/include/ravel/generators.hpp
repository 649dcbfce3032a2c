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
#include <string>
#include <vector>

#include "ravel/mdp.hpp"
#include "ravel/rng.hpp"

namespace ravel {

/// Cyclic shift S_n with S e_i = e_{i+1 mod n}, i.e. row i has a 1 in column
/// (i+1) mod n.
Matrix cyclic_shift(int n);

/// Nonnegative mixture sum_j coeffs[j] * S_n^j (coefficients over I, S, S^2,
/// ...). Coefficients must sum to 1.
Matrix cyclic_mix(int n, const std::vector<double>& coeffs);

/// The four standard ergodic test kernels: P1 = 0.5 I5 + 0.5 S5,
/// P2 = 0.6 I6 + 0.4 S6, P3 = 0.55 I7 + 0.45 S7, P4 = 0.6 I8 + 0.3 S8 + 0.1 S8^2.
/// Accepts labels "P1".."P4"; throws ConfigError otherwise.
Matrix builtin_chain(const std::string& label);

/// Random MDP with Dirichlet(concentration) kernel rows and uniform rewards.
TabularMdp dirichlet_mdp(int n_states, int n_actions, double concentration, Rng& rng);

/// Random probability vector and ergodic chain helpers used across tests and
/// experiment drivers.
Matrix random_ergodic_chain(int n_states, double concentration, Rng& rng);

} // namespace ravel
