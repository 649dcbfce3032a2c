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

#include "ravel/presets.hpp"

#include <map>

#include "ravel/errors.hpp"

namespace ravel {

namespace {

const std::map<std::string, std::string>& preset_map() {
    static const std::map<std::string, std::string> presets = {
        {"table1", R"(# Non-robust one-step contraction on the standard cyclic kernels.
[run]
seed = 1

[contraction]
mode = nonrobust
labels = P1 P2 P3 P4
probes = 1000
epsilon_fraction = 0.25
golden_rho = 0.8090 0.8718 0.9020 0.8700
golden_alpha = 0.9045 0.9359 0.9510 0.9350
golden_epsilon = 0.0239 0.0160 0.0122 0.0162
golden_beta = 0.9284 0.9519 0.9633 0.9513
golden_tol = 1e-3
)"},
        {"table2-contamination", R"(# Robust contraction under contamination uncertainty.
[run]
seed = 2

[uncertainty]
kind = contamination
delta = 0.15

[contraction]
mode = robust
labels = P1 P2 P3 P4
family_size = 30
max_product_length = 3
samples_per_k = 25
epsilon_fraction = 0.25
probes_per_kernel = 50
)"},
        {"table3-tv", R"(# Robust contraction under total-variation uncertainty.
[run]
seed = 3

[uncertainty]
kind = tv
delta = 0.15

[contraction]
mode = robust
labels = P1 P2 P3 P4
family_size = 30
max_product_length = 3
samples_per_k = 25
epsilon_fraction = 0.25
probes_per_kernel = 50
)"},
        {"table4-wasserstein", R"(# Robust contraction under Wasserstein-1 uncertainty (line metric).
[run]
seed = 4

[uncertainty]
kind = wasserstein
delta = 0.15
metric = line
power = 1

[contraction]
mode = robust
labels = P1 P2 P3 P4
family_size = 30
max_product_length = 3
samples_per_k = 25
epsilon_fraction = 0.25
probes_per_kernel = 50
)"},
        {"eval-contamination", R"(# Exact-vs-oracle support check with the closed-form contamination set.
[run]
seed = 5

[mdp]
source = inline
n_states = 4
n_actions = 2
rewards = 0.9 0.1 0.5 0.3 0.7 0.2 0.4 0.6
kernel = 0.4 0.3 0.2 0.1 0.25 0.25 0.25 0.25 0.1 0.2 0.3 0.4 0.3 0.3 0.2 0.2 0.1 0.1 0.4 0.4 0.5 0.2 0.2 0.1 0.25 0.25 0.25 0.25 0.2 0.3 0.3 0.2

[uncertainty]
kind = contamination
delta = 0.2

[support]
v = 1 0.25 0.5 0
)"},
        {"eval-tv-random", R"(# Exact-vs-oracle support check on a random instance, TV ball.
[run]
seed = 7

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 7

[uncertainty]
kind = tv
delta = 0.3

[support]
v_seed = 7
)"},
        {"eval-wasserstein-discrete", R"(# Same instance as eval-tv-random; the discrete metric reduces W1 to TV.
[run]
seed = 7

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 7

[uncertainty]
kind = wasserstein
delta = 0.3
metric = discrete
power = 1

[support]
v_seed = 7
)"},
        {"mlmc-default", R"(# Sample-accounting and bias/variance grid on a 3-state row.
[run]
seed = 9

[mdp]
source = inline
n_states = 3
n_actions = 1
rewards = 0.5 0.5 0.5
kernel = 0.5 0.3 0.2 0.5 0.3 0.2 0.5 0.3 0.2

[uncertainty]
kind = tv
delta = 0.2

[support]
v = 1 0.4 0

[mlmc]
n_max_grid = 2 5 10
replications = 4000000
state = 0
action = 0
)"},
        {"contamination-5state", R"(# Two-phase TD on the standard 5-state instance, contamination ball.
[run]
seed = 11

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 11

[uncertainty]
kind = contamination
delta = 0.15

[mlmc]
n_max = 12

[td]
horizon = 200000
value_step_c = 8
value_step_k = 10
gain_step_c = 1
gain_step_k = 1
anchor = 0
oracle_tol = 1e-9
oracle_max_iters = 1000000
v_error_threshold = 0.05
g_error_threshold = 0.05
trace_points = 20000
)"},
        {"tv-5state", R"(# Two-phase TD on the standard 5-state instance, TV ball.
[run]
seed = 11

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 11

[uncertainty]
kind = tv
delta = 0.15

[mlmc]
n_max = 12

[td]
horizon = 200000
value_step_c = 8
value_step_k = 10
gain_step_c = 1
gain_step_k = 1
anchor = 0
oracle_tol = 1e-9
oracle_max_iters = 1000000
v_error_threshold = 0.05
g_error_threshold = 0.05
trace_points = 20000
)"},
        {"wasserstein-5state", R"(# Two-phase TD on the standard 5-state instance, Wasserstein-1 ball.
[run]
seed = 11

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 11

[uncertainty]
kind = wasserstein
delta = 0.15
metric = line
power = 1

[mlmc]
n_max = 12

[td]
horizon = 200000
value_step_c = 8
value_step_k = 10
gain_step_c = 1
gain_step_k = 1
anchor = 0
oracle_tol = 1e-9
oracle_max_iters = 1000000
v_error_threshold = 0.05
g_error_threshold = 0.05
trace_points = 20000
)"},
        {"td-zero-delta", R"(# Zero-radius run: TD must recover the non-robust solution.
[run]
seed = 11

[mdp]
source = generator
recipe = dirichlet
n_states = 5
n_actions = 2
concentration = 1
mdp_seed = 11

[uncertainty]
kind = contamination
delta = 0

[td]
horizon = 100000
value_step_c = 8
value_step_k = 10
gain_step_c = 1
gain_step_k = 1
anchor = 0
oracle_tol = 1e-10
oracle_max_iters = 1000000
v_error_threshold = 0.05
g_error_threshold = 0.05
)"},
        {"oracle-constant-reward", R"(# Constant rewards force g* = c and v* = 0.
[run]
seed = 13

[mdp]
source = inline
n_states = 2
n_actions = 1
rewards = 0.6 0.6
kernel = 0.5 0.5 0.5 0.5

[uncertainty]
kind = contamination
delta = 0.2

[td]
oracle_tol = 1e-10
oracle_max_iters = 100000
)"},
    };
    return presets;
}

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_map()) names.push_back(name);
    return names;
}

const std::string& preset_text(const std::string& name) {
    const auto& presets = preset_map();
    const auto it = presets.find(name);
    if (it == presets.end()) throw ConfigError("unknown preset: " + name);
    return it->second;
}

} // namespace ravel
