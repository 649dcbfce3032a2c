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

#include "ravel/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ravel/csv.hpp"
#include "ravel/errors.hpp"
#include "ravel/generators.hpp"
#include "ravel/rng.hpp"

namespace ravel {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    std::istringstream stream(s);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

double parse_real_token(const std::string& token, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (errno != 0 || end == token.c_str() || *end != '\0')
        throw ConfigError(context + ": expected a real number, got '" + token + "'");
    return value;
}

long parse_long_token(const std::string& token, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const long value = std::strtol(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0')
        throw ConfigError(context + ": expected an integer, got '" + token + "'");
    return value;
}

std::uint64_t parse_u64_token(const std::string& token, const std::string& context) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0' || token.front() == '-')
        throw ConfigError(context + ": expected an unsigned integer, got '" + token + "'");
    return static_cast<std::uint64_t>(value);
}

struct Entry {
    std::string section;
    std::string key;
    std::vector<std::string> values;

    std::string context() const { return "[" + section + "] " + key; }

    std::string one() const {
        if (values.size() != 1)
            throw ConfigError(context() + ": expected exactly one value");
        return values[0];
    }
    double real() const { return parse_real_token(one(), context()); }
    long integer() const { return parse_long_token(one(), context()); }
    std::uint64_t u64() const { return parse_u64_token(one(), context()); }
    std::vector<double> reals() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& t : values) out.push_back(parse_real_token(t, context()));
        return out;
    }
    std::vector<int> ints() const {
        std::vector<int> out;
        out.reserve(values.size());
        for (const auto& t : values)
            out.push_back(static_cast<int>(parse_long_token(t, context())));
        return out;
    }
    std::vector<long> longs() const {
        std::vector<long> out;
        out.reserve(values.size());
        for (const auto& t : values) out.push_back(parse_long_token(t, context()));
        return out;
    }
};

std::vector<Entry> lex_config(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": entry outside any section");
        Entry entry;
        entry.section = section;
        entry.key = trim(line.substr(0, eq));
        entry.values = split_tokens(line.substr(eq + 1));
        if (entry.key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        entries.push_back(std::move(entry));
    }
    return entries;
}

void apply_entry(ExperimentConfig& cfg, const Entry& e) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    if (s == "run") {
        if (k == "seed") cfg.run.seed = e.u64();
        else if (k == "threads") cfg.run.threads = static_cast<int>(e.integer());
        else if (k == "out") cfg.run.out = e.values.empty() ? "" : e.one();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "mdp") {
        if (k == "source") cfg.mdp.source = e.one();
        else if (k == "recipe") cfg.mdp.recipe = e.one();
        else if (k == "n_states") cfg.mdp.n_states = static_cast<int>(e.integer());
        else if (k == "n_actions") cfg.mdp.n_actions = static_cast<int>(e.integer());
        else if (k == "concentration") cfg.mdp.concentration = e.real();
        else if (k == "mdp_seed") cfg.mdp.mdp_seed = e.u64();
        else if (k == "coefficients") cfg.mdp.coefficients = e.reals();
        else if (k == "rewards") cfg.mdp.rewards = e.reals();
        else if (k == "kernel") cfg.mdp.kernel = e.reals();
        else if (k == "path") cfg.mdp.path = e.one();
        else if (k == "reward_cap") cfg.mdp.reward_cap = e.real();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "policy") {
        if (k == "kind") cfg.policy.kind = e.one();
        else if (k == "probs") cfg.policy.probs = e.reals();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "uncertainty") {
        if (k == "kind") cfg.uncertainty.kind = e.one();
        else if (k == "delta") cfg.uncertainty.delta = e.real();
        else if (k == "metric") cfg.uncertainty.metric = e.one();
        else if (k == "metric_path") cfg.uncertainty.metric_path = e.one();
        else if (k == "power") cfg.uncertainty.power = e.real();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "contraction") {
        if (k == "mode") cfg.contraction.mode = e.one();
        else if (k == "labels") cfg.contraction.labels = e.values;
        else if (k == "family_size") cfg.contraction.family_size = static_cast<int>(e.integer());
        else if (k == "max_product_length")
            cfg.contraction.max_product_length = static_cast<int>(e.integer());
        else if (k == "samples_per_k") cfg.contraction.samples_per_k = static_cast<int>(e.integer());
        else if (k == "epsilon_fraction") cfg.contraction.epsilon_fraction = e.real();
        else if (k == "probes") cfg.contraction.probes = static_cast<int>(e.integer());
        else if (k == "probes_per_kernel")
            cfg.contraction.probes_per_kernel = static_cast<int>(e.integer());
        else if (k == "golden_rho") cfg.contraction.golden_rho = e.reals();
        else if (k == "golden_alpha") cfg.contraction.golden_alpha = e.reals();
        else if (k == "golden_epsilon") cfg.contraction.golden_epsilon = e.reals();
        else if (k == "golden_beta") cfg.contraction.golden_beta = e.reals();
        else if (k == "golden_tol") cfg.contraction.golden_tol = e.real();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "support") {
        if (k == "v") cfg.support.v = e.reals();
        else if (k == "v_seed") cfg.support.v_seed = e.u64();
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "mlmc") {
        if (k == "n_max") cfg.mlmc.n_max = static_cast<int>(e.integer());
        else if (k == "n_max_grid") cfg.mlmc.n_max_grid = e.ints();
        else if (k == "replications") cfg.mlmc.replications = e.integer();
        else if (k == "state") cfg.mlmc.state = static_cast<int>(e.integer());
        else if (k == "action") cfg.mlmc.action = static_cast<int>(e.integer());
        else throw ConfigError("unknown key " + e.context());
    } else if (s == "td") {
        if (k == "horizon") cfg.td.horizon = e.integer();
        else if (k == "value_step_c") cfg.td.value_step_c = e.real();
        else if (k == "value_step_k") cfg.td.value_step_k = e.real();
        else if (k == "gain_step_c") cfg.td.gain_step_c = e.real();
        else if (k == "gain_step_k") cfg.td.gain_step_k = e.real();
        else if (k == "anchor") cfg.td.anchor = static_cast<int>(e.integer());
        else if (k == "oracle_tol") cfg.td.oracle_tol = e.real();
        else if (k == "oracle_max_iters") cfg.td.oracle_max_iters = e.integer();
        else if (k == "v_error_threshold") cfg.td.v_error_threshold = e.real();
        else if (k == "g_error_threshold") cfg.td.g_error_threshold = e.real();
        else if (k == "trace_points") cfg.td.trace_points = e.longs();
        else throw ConfigError("unknown key " + e.context());
    } else {
        throw ConfigError("unknown section [" + s + "]");
    }
}

void append_kv(std::string& out, const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

std::string join_reals(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += format_real_exact(values[i]);
    }
    return out;
}

template <typename T>
std::string join_ints(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += values[i];
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    for (const Entry& e : lex_config(text)) apply_entry(cfg, e);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    out += "[run]\n";
    append_kv(out, "seed", std::to_string(cfg.run.seed));
    append_kv(out, "threads", std::to_string(cfg.run.threads));
    if (!cfg.run.out.empty()) append_kv(out, "out", cfg.run.out);

    out += "\n[mdp]\n";
    append_kv(out, "source", cfg.mdp.source);
    append_kv(out, "recipe", cfg.mdp.recipe);
    append_kv(out, "n_states", std::to_string(cfg.mdp.n_states));
    append_kv(out, "n_actions", std::to_string(cfg.mdp.n_actions));
    append_kv(out, "concentration", format_real_exact(cfg.mdp.concentration));
    append_kv(out, "mdp_seed", std::to_string(cfg.mdp.mdp_seed));
    if (!cfg.mdp.coefficients.empty())
        append_kv(out, "coefficients", join_reals(cfg.mdp.coefficients));
    if (!cfg.mdp.rewards.empty()) append_kv(out, "rewards", join_reals(cfg.mdp.rewards));
    if (!cfg.mdp.kernel.empty()) append_kv(out, "kernel", join_reals(cfg.mdp.kernel));
    if (!cfg.mdp.path.empty()) append_kv(out, "path", cfg.mdp.path);
    append_kv(out, "reward_cap", format_real_exact(cfg.mdp.reward_cap));

    out += "\n[policy]\n";
    append_kv(out, "kind", cfg.policy.kind);
    if (!cfg.policy.probs.empty()) append_kv(out, "probs", join_reals(cfg.policy.probs));

    out += "\n[uncertainty]\n";
    append_kv(out, "kind", cfg.uncertainty.kind);
    append_kv(out, "delta", format_real_exact(cfg.uncertainty.delta));
    append_kv(out, "metric", cfg.uncertainty.metric);
    if (!cfg.uncertainty.metric_path.empty())
        append_kv(out, "metric_path", cfg.uncertainty.metric_path);
    append_kv(out, "power", format_real_exact(cfg.uncertainty.power));

    out += "\n[contraction]\n";
    append_kv(out, "mode", cfg.contraction.mode);
    if (!cfg.contraction.labels.empty())
        append_kv(out, "labels", join_strings(cfg.contraction.labels));
    append_kv(out, "family_size", std::to_string(cfg.contraction.family_size));
    append_kv(out, "max_product_length", std::to_string(cfg.contraction.max_product_length));
    append_kv(out, "samples_per_k", std::to_string(cfg.contraction.samples_per_k));
    append_kv(out, "epsilon_fraction", format_real_exact(cfg.contraction.epsilon_fraction));
    append_kv(out, "probes", std::to_string(cfg.contraction.probes));
    append_kv(out, "probes_per_kernel", std::to_string(cfg.contraction.probes_per_kernel));
    if (!cfg.contraction.golden_rho.empty())
        append_kv(out, "golden_rho", join_reals(cfg.contraction.golden_rho));
    if (!cfg.contraction.golden_alpha.empty())
        append_kv(out, "golden_alpha", join_reals(cfg.contraction.golden_alpha));
    if (!cfg.contraction.golden_epsilon.empty())
        append_kv(out, "golden_epsilon", join_reals(cfg.contraction.golden_epsilon));
    if (!cfg.contraction.golden_beta.empty())
        append_kv(out, "golden_beta", join_reals(cfg.contraction.golden_beta));
    append_kv(out, "golden_tol", format_real_exact(cfg.contraction.golden_tol));

    out += "\n[support]\n";
    if (!cfg.support.v.empty()) append_kv(out, "v", join_reals(cfg.support.v));
    append_kv(out, "v_seed", std::to_string(cfg.support.v_seed));

    out += "\n[mlmc]\n";
    append_kv(out, "n_max", std::to_string(cfg.mlmc.n_max));
    append_kv(out, "n_max_grid", join_ints(cfg.mlmc.n_max_grid));
    append_kv(out, "replications", std::to_string(cfg.mlmc.replications));
    append_kv(out, "state", std::to_string(cfg.mlmc.state));
    append_kv(out, "action", std::to_string(cfg.mlmc.action));

    out += "\n[td]\n";
    append_kv(out, "horizon", std::to_string(cfg.td.horizon));
    append_kv(out, "value_step_c", format_real_exact(cfg.td.value_step_c));
    append_kv(out, "value_step_k", format_real_exact(cfg.td.value_step_k));
    append_kv(out, "gain_step_c", format_real_exact(cfg.td.gain_step_c));
    append_kv(out, "gain_step_k", format_real_exact(cfg.td.gain_step_k));
    append_kv(out, "anchor", std::to_string(cfg.td.anchor));
    append_kv(out, "oracle_tol", format_real_exact(cfg.td.oracle_tol));
    append_kv(out, "oracle_max_iters", std::to_string(cfg.td.oracle_max_iters));
    append_kv(out, "v_error_threshold", format_real_exact(cfg.td.v_error_threshold));
    append_kv(out, "g_error_threshold", format_real_exact(cfg.td.g_error_threshold));
    if (!cfg.td.trace_points.empty())
        append_kv(out, "trace_points", join_ints(cfg.td.trace_points));
    return out;
}

MdpInstance load_mdp_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open MDP file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();

    ExperimentConfig carrier;
    for (const Entry& e : lex_config(buffer.str())) {
        if (e.section != "mdp" && e.section != "policy")
            throw ConfigError("MDP file: unexpected section [" + e.section + "]");
        apply_entry(carrier, e);
    }
    carrier.mdp.source = "inline";

    MdpInstance instance{build_mdp(carrier), std::nullopt};
    if (!carrier.policy.probs.empty()) {
        const int s_count = instance.mdp.n_states;
        const int a_count = instance.mdp.n_actions;
        if (static_cast<int>(carrier.policy.probs.size()) != s_count * a_count)
            throw ConfigError("MDP file: policy probs size mismatch");
        Matrix probs(s_count, a_count);
        for (int s = 0; s < s_count; ++s)
            for (int a = 0; a < a_count; ++a)
                probs(s, a) = carrier.policy.probs[s * a_count + a];
        instance.policy = Policy(probs);
    }
    return instance;
}

TabularMdp build_mdp(const ExperimentConfig& cfg) {
    const MdpSection& m = cfg.mdp;
    if (m.source == "file") {
        if (m.path.empty()) throw ConfigError("[mdp] path required for source = file");
        return load_mdp_file(m.path).mdp;
    }
    if (m.source == "inline") {
        const int s_count = m.n_states;
        const int a_count = m.n_actions;
        if (static_cast<int>(m.rewards.size()) != s_count * a_count)
            throw ConfigError("[mdp] rewards must hold n_states * n_actions entries");
        if (static_cast<int>(m.kernel.size()) != a_count * s_count * s_count)
            throw ConfigError("[mdp] kernel must hold n_actions * n_states^2 entries");
        Matrix rewards(s_count, a_count);
        for (int s = 0; s < s_count; ++s)
            for (int a = 0; a < a_count; ++a) rewards(s, a) = m.rewards[s * a_count + a];
        Kernel kernel(a_count, Matrix(s_count, s_count));
        for (int a = 0; a < a_count; ++a)
            for (int s = 0; s < s_count; ++s)
                for (int j = 0; j < s_count; ++j)
                    kernel[a](s, j) = m.kernel[(a * s_count + s) * s_count + j];
        try {
            return TabularMdp(rewards, kernel, m.reward_cap);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("[mdp] ") + err.what());
        }
    }
    if (m.source == "generator") {
        if (m.recipe == "dirichlet") {
            Rng rng(m.mdp_seed);
            try {
                return dirichlet_mdp(m.n_states, m.n_actions, m.concentration, rng);
            } catch (const std::invalid_argument& err) {
                throw ConfigError(std::string("[mdp] ") + err.what());
            }
        }
        if (m.recipe == "cyclic") {
            if (m.coefficients.empty())
                throw ConfigError("[mdp] coefficients required for recipe = cyclic");
            Matrix chain;
            try {
                chain = cyclic_mix(m.n_states, m.coefficients);
            } catch (const std::invalid_argument& err) {
                throw ConfigError(std::string("[mdp] ") + err.what());
            }
            // Single-action MDP over the mixed chain; rewards ramp over states
            // so the instance has a nontrivial value function.
            Matrix rewards(m.n_states, 1);
            for (int s = 0; s < m.n_states; ++s)
                rewards(s, 0) = m.n_states > 1
                                    ? static_cast<double>(s) / (m.n_states - 1)
                                    : 0.0;
            return TabularMdp(rewards, Kernel{chain});
        }
        throw ConfigError("[mdp] unknown recipe: " + m.recipe);
    }
    throw ConfigError("[mdp] unknown source: " + m.source);
}

Policy build_policy(const ExperimentConfig& cfg, const TabularMdp& mdp) {
    const PolicySection& p = cfg.policy;
    if (p.kind == "uniform") return Policy::uniform(mdp.n_states, mdp.n_actions);
    if (p.kind == "inline") {
        if (static_cast<int>(p.probs.size()) != mdp.n_states * mdp.n_actions)
            throw ConfigError("[policy] probs must hold n_states * n_actions entries");
        Matrix probs(mdp.n_states, mdp.n_actions);
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a)
                probs(s, a) = p.probs[s * mdp.n_actions + a];
        try {
            return Policy(probs);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("[policy] ") + err.what());
        }
    }
    if (p.kind == "file") {
        if (cfg.mdp.source != "file")
            throw ConfigError("[policy] kind = file requires [mdp] source = file");
        const MdpInstance instance = load_mdp_file(cfg.mdp.path);
        if (!instance.policy)
            throw ConfigError("[policy] MDP file does not carry a policy");
        return *instance.policy;
    }
    throw ConfigError("[policy] unknown kind: " + p.kind);
}

namespace {

Matrix load_csv_matrix(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open metric file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(file, line)) {
        for (char& c : line)
            if (c == ',') c = ' ';
        line = trim(line);
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& token : split_tokens(line))
            row.push_back(parse_real_token(token, "metric file"));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("metric file is empty: " + path);
    const std::size_t n = rows.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw ConfigError("metric file is not square: " + path);
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

} // namespace

UncertaintySpec build_uncertainty(const ExperimentConfig& cfg, int n_states) {
    const UncertaintySection& u = cfg.uncertainty;
    try {
        const UncertaintyKind kind = uncertainty_kind_from_string(u.kind);
        if (kind == UncertaintyKind::Contamination)
            return UncertaintySpec::contamination(u.delta);
        if (kind == UncertaintyKind::TotalVariation)
            return UncertaintySpec::total_variation(u.delta);

        Matrix metric;
        if (u.metric == "discrete") {
            metric = Matrix::Ones(n_states, n_states) - Matrix::Identity(n_states, n_states);
        } else if (u.metric == "line") {
            metric = Matrix(n_states, n_states);
            for (int i = 0; i < n_states; ++i)
                for (int j = 0; j < n_states; ++j) metric(i, j) = std::abs(i - j);
        } else if (u.metric == "file") {
            metric = load_csv_matrix(u.metric_path);
            if (metric.rows() != n_states)
                throw ConfigError("[uncertainty] metric file dimension mismatch");
        } else {
            throw ConfigError("[uncertainty] unknown metric: " + u.metric);
        }
        return UncertaintySpec::wasserstein(u.delta, metric, u.power);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("[uncertainty] ") + err.what());
    }
}

Vector build_support_vector(const ExperimentConfig& cfg, int n_states) {
    if (!cfg.support.v.empty()) {
        if (static_cast<int>(cfg.support.v.size()) != n_states)
            throw ConfigError("[support] v length must equal n_states");
        Vector v(n_states);
        for (int i = 0; i < n_states; ++i) v[i] = cfg.support.v[i];
        return v;
    }
    Rng rng(cfg.support.v_seed);
    Vector v(n_states);
    for (int i = 0; i < n_states; ++i) v[i] = rng.u01();
    return v;
}

} // namespace ravel
