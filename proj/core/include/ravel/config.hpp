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
#include <optional>
#include <string>
#include <vector>

#include "ravel/mdp.hpp"
#include "ravel/uncertainty.hpp"

namespace ravel {

// Experiment configuration file grammar
// -------------------------------------
// Line oriented. '#' starts a comment (rest of line). Section headers are
// bracketed names; entries are `key = value [value ...]` with whitespace-
// separated values. Unknown sections and keys are rejected. Every key has a
// documented default; a parsed config serializes canonically (fixed section
// and key order, full-precision reals) and the parse -> serialize -> parse
// composition is the identity on values.

struct RunSection {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out; // empty = stdout

    bool operator==(const RunSection&) const = default;
};

struct MdpSection {
    std::string source = "generator"; // generator | inline | file
    std::string recipe = "dirichlet"; // dirichlet | cyclic (generator only)
    int n_states = 2;
    int n_actions = 1;
    double concentration = 1.0;
    std::uint64_t mdp_seed = 0;
    std::vector<double> coefficients; // cyclic mix over I, S, S^2, ...
    std::vector<double> rewards;      // inline, S*A row-major
    std::vector<double> kernel;       // inline, A blocks of S*S row-major
    std::string path;                 // file source
    double reward_cap = 1.0;

    bool operator==(const MdpSection&) const = default;
};

struct PolicySection {
    std::string kind = "uniform"; // uniform | inline
    std::vector<double> probs;    // inline, S*A row-major

    bool operator==(const PolicySection&) const = default;
};

struct UncertaintySection {
    std::string kind = "contamination"; // contamination | tv | wasserstein
    double delta = 0.0;
    std::string metric = "discrete"; // discrete | line | file (wasserstein)
    std::string metric_path;
    double power = 1.0;

    bool operator==(const UncertaintySection&) const = default;
};

struct ContractionSection {
    std::string mode = "nonrobust"; // nonrobust | robust
    std::vector<std::string> labels; // built-in chains; empty = use [mdp]
    int family_size = 30;
    int max_product_length = 3;
    int samples_per_k = 25;
    double epsilon_fraction = 0.25;
    int probes = 1000;
    int probes_per_kernel = 50;
    // Optional per-label reference columns; checked to golden_tol when given.
    std::vector<double> golden_rho;
    std::vector<double> golden_alpha;
    std::vector<double> golden_epsilon;
    std::vector<double> golden_beta;
    double golden_tol = 1e-3;

    bool operator==(const ContractionSection&) const = default;
};

struct SupportSection {
    std::vector<double> v;      // explicit value vector
    std::uint64_t v_seed = 0;   // U[0,1] entries when v is empty

    bool operator==(const SupportSection&) const = default;
};

struct MlmcSection {
    int n_max = 8;
    std::vector<int> n_max_grid = {2, 5, 10};
    long replications = 100000;
    int state = 0;
    int action = 0;

    bool operator==(const MlmcSection&) const = default;
};

struct TdSection {
    long horizon = 1000;
    double value_step_c = 1.0;
    double value_step_k = 3.0;
    double gain_step_c = 1.0;
    double gain_step_k = 1.0;
    int anchor = 0;
    double oracle_tol = 1e-9;
    long oracle_max_iters = 1000000;
    double v_error_threshold = 1.0;
    double g_error_threshold = 1.0;
    std::vector<long> trace_points;

    bool operator==(const TdSection&) const = default;
};

struct ExperimentConfig {
    RunSection run;
    MdpSection mdp;
    PolicySection policy;
    UncertaintySection uncertainty;
    ContractionSection contraction;
    SupportSection support;
    MlmcSection mlmc;
    TdSection td;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the grammar above; throws ConfigError on unknown keys, type errors
/// or malformed lines.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Canonical full-precision serialization.
std::string serialize_config(const ExperimentConfig& cfg);

/// MDP instance file: the same grammar restricted to the [mdp] (inline keys)
/// and optional [policy] sections.
struct MdpInstance {
    TabularMdp mdp;
    std::optional<Policy> policy;
};
MdpInstance load_mdp_file(const std::string& path);

// Builders from a parsed configuration.
TabularMdp build_mdp(const ExperimentConfig& cfg);
Policy build_policy(const ExperimentConfig& cfg, const TabularMdp& mdp);
UncertaintySpec build_uncertainty(const ExperimentConfig& cfg, int n_states);
Vector build_support_vector(const ExperimentConfig& cfg, int n_states);

} // namespace ravel
