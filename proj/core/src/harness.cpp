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

#include "ravel/harness.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "ravel/csv.hpp"
#include "ravel/errors.hpp"
#include "ravel/generators.hpp"
#include "ravel/mlmc.hpp"
#include "ravel/seminorm.hpp"
#include "ravel/td.hpp"

namespace ravel {

namespace {

std::string fmt(double x) { return format_real(x); }

struct ContractionTarget {
    std::string label;
    InducedChain chain;
};

std::vector<ContractionTarget> contraction_targets(const ExperimentConfig& cfg) {
    std::vector<ContractionTarget> targets;
    if (!cfg.contraction.labels.empty()) {
        for (const std::string& label : cfg.contraction.labels)
            targets.push_back({label, InducedChain(builtin_chain(label))});
    } else {
        const TabularMdp mdp = build_mdp(cfg);
        const Policy policy = build_policy(cfg, mdp);
        targets.push_back({"custom", induced_kernel(mdp, policy)});
    }
    return targets;
}

} // namespace

int cmd_validate_contraction(const ExperimentConfig& cfg, std::ostream& log) {
    const ContractionSection& c = cfg.contraction;
    const bool robust = [&] {
        if (c.mode == "robust") return true;
        if (c.mode == "nonrobust") return false;
        throw ConfigError("[contraction] unknown mode: " + c.mode);
    }();
    if (c.probes < 1 || c.probes_per_kernel < 1)
        throw ConfigError("[contraction] probe counts must be positive");
    if (robust && c.family_size < 1)
        throw ConfigError("[contraction] family_size must be positive in robust mode");
    if (!(c.epsilon_fraction > 0.0 && c.epsilon_fraction < 1.0))
        throw ConfigError("[contraction] epsilon_fraction must lie in (0, 1)");
    const auto targets = contraction_targets(cfg);
    for (const auto& golden :
         {c.golden_rho, c.golden_alpha, c.golden_epsilon, c.golden_beta})
        if (!golden.empty() && golden.size() != targets.size())
            throw ConfigError("[contraction] golden column length must match labels");

    CsvTable table(
        robust ? std::vector<std::string>{"label", "n", "delta", "m", "K", "samples_per_k",
                                          "max_span_ratio", "rho_hat", "alpha", "epsilon",
                                          "gamma", "ratio_min", "ratio_median", "ratio_p90",
                                          "ratio_max"}
               : std::vector<std::string>{"label", "n", "max_span_ratio", "rho_hat", "alpha",
                                          "epsilon", "beta", "ratio_min", "ratio_median",
                                          "ratio_p90", "ratio_max"});

    bool violated = false;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        ContractionExperimentConfig exp;
        exp.robust = robust;
        if (robust) exp.spec = build_uncertainty(cfg, targets[i].chain.n_states());
        exp.family_size = c.family_size;
        exp.max_len = c.max_product_length;
        exp.samples_per_k = c.samples_per_k;
        exp.epsilon_fraction = c.epsilon_fraction;
        exp.probes = c.probes;
        exp.probes_per_kernel = c.probes_per_kernel;
        exp.seed = derive_seed(cfg.run.seed, i);
        exp.n_threads = cfg.run.threads;

        const ContractionRow row =
            contraction_experiment(targets[i].label, targets[i].chain, exp);

        if (row.ratio_max > row.beta_or_gamma + 1e-9) {
            log << "violation: " << row.label << " ratio_max " << fmt(row.ratio_max)
                << " exceeds " << fmt(row.beta_or_gamma) << "\n";
            violated = true;
        }
        auto check_golden = [&](const std::vector<double>& golden, double have,
                                const char* what) {
            if (golden.empty()) return;
            if (std::abs(golden[i] - have) > c.golden_tol) {
                log << "golden mismatch: " << row.label << " " << what << " computed "
                    << fmt(have) << " vs reference " << fmt(golden[i]) << "\n";
                violated = true;
            }
        };
        check_golden(c.golden_rho, row.rho_hat, "rho");
        check_golden(c.golden_alpha, row.alpha, "alpha");
        check_golden(c.golden_epsilon, row.epsilon, "epsilon");
        check_golden(c.golden_beta, row.beta_or_gamma, "beta");

        if (robust) {
            table.add_row({row.label, std::to_string(row.n), fmt(row.delta),
                           std::to_string(row.family_size), std::to_string(row.max_len),
                           std::to_string(row.samples_per_k), fmt(row.max_span_ratio),
                           fmt(row.rho_hat), fmt(row.alpha), fmt(row.epsilon),
                           fmt(row.beta_or_gamma), fmt(row.ratio_min), fmt(row.ratio_median),
                           fmt(row.ratio_p90), fmt(row.ratio_max)});
        } else {
            table.add_row({row.label, std::to_string(row.n), fmt(row.max_span_ratio),
                           fmt(row.rho_hat), fmt(row.alpha), fmt(row.epsilon),
                           fmt(row.beta_or_gamma), fmt(row.ratio_min), fmt(row.ratio_median),
                           fmt(row.ratio_p90), fmt(row.ratio_max)});
        }
    }
    write_output(cfg.run.out, table.to_string());
    return violated ? kExitViolation : kExitOk;
}

int cmd_eval_support(const ExperimentConfig& cfg, std::ostream& log) {
    const TabularMdp mdp = build_mdp(cfg);
    const UncertaintySpec spec = build_uncertainty(cfg, mdp.n_states);
    const Vector v = build_support_vector(cfg, mdp.n_states);
    const bool with_oracle = mdp.n_states <= kOracleMaxStates;
    if (!with_oracle)
        log << "warning: " << mdp.n_states
            << " states exceed the oracle cap; oracle column omitted\n";

    CsvTable table(with_oracle
                       ? std::vector<std::string>{"s", "a", "sigma_exact", "sigma_oracle",
                                                  "abs_diff"}
                       : std::vector<std::string>{"s", "a", "sigma_exact"});
    bool violated = false;
    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a) {
            const Vector row = mdp.nominal_kernel[a].row(s).transpose();
            const double exact = support_dispatch(row, v, spec).value;
            if (with_oracle) {
                const double oracle = support_lp_oracle(row, v, spec);
                const double diff = std::abs(exact - oracle);
                if (diff > 1e-8) violated = true;
                table.add_row({std::to_string(s), std::to_string(a), fmt(exact), fmt(oracle),
                               fmt(diff)});
            } else {
                table.add_row({std::to_string(s), std::to_string(a), fmt(exact)});
            }
        }
    write_output(cfg.run.out, table.to_string());
    return violated ? kExitViolation : kExitOk;
}

int cmd_mlmc_stats(const ExperimentConfig& cfg, std::ostream& log) {
    if (cfg.mlmc.replications < 1)
        throw ConfigError("[mlmc] replications must be positive");
    if (cfg.mlmc.n_max_grid.empty())
        throw ConfigError("[mlmc] n_max_grid must be nonempty");
    const TabularMdp mdp = build_mdp(cfg);
    const UncertaintySpec spec = build_uncertainty(cfg, mdp.n_states);
    const Vector v = build_support_vector(cfg, mdp.n_states);
    if (cfg.mlmc.state < 0 || cfg.mlmc.state >= mdp.n_states || cfg.mlmc.action < 0 ||
        cfg.mlmc.action >= mdp.n_actions)
        throw ConfigError("[mlmc] state/action out of range");
    const RowSampler sampler(
        mdp.nominal_kernel[cfg.mlmc.action].row(cfg.mlmc.state).transpose());

    CsvTable table({"kind", "delta", "n_max", "replications", "mean_samples", "bias",
                    "variance", "sigma_exact", "seed"});
    bool violated = false;
    for (std::size_t i = 0; i < cfg.mlmc.n_max_grid.size(); ++i) {
        const int n_max = cfg.mlmc.n_max_grid[i];
        Rng rng(derive_seed(cfg.run.seed, i));
        const MlmcReport report = mlmc_statistics(sampler, v, spec, MlmcConfig{n_max},
                                                  cfg.mlmc.replications, rng,
                                                  cfg.run.threads);
        if (spec.kind != UncertaintyKind::Contamination &&
            cfg.mlmc.replications >= 100000) {
            const double expected = n_max + 2.0;
            if (std::abs(report.mean_samples - expected) > 0.01 * expected) {
                log << "violation: n_max " << n_max << " mean samples "
                    << fmt(report.mean_samples) << " deviates from " << fmt(expected)
                    << " by more than 1%\n";
                violated = true;
            }
        }
        table.add_row({to_string(spec.kind), fmt(spec.delta), std::to_string(n_max),
                       std::to_string(cfg.mlmc.replications), fmt(report.mean_samples),
                       fmt(report.empirical_bias), fmt(report.empirical_variance),
                       fmt(report.sigma_exact), std::to_string(cfg.run.seed)});
    }
    write_output(cfg.run.out, table.to_string());
    return violated ? kExitViolation : kExitOk;
}

int cmd_td_run(const ExperimentConfig& cfg, std::ostream& log) {
    const TabularMdp mdp = build_mdp(cfg);
    const Policy policy = build_policy(cfg, mdp);
    const UncertaintySpec spec = build_uncertainty(cfg, mdp.n_states);

    const RadiusCertificate cert = radius_certificate(induced_kernel(mdp, policy), spec);
    if (!cert.satisfied)
        log << "warning: radius certificate not satisfied (threshold "
            << fmt(cert.threshold) << "); attempting the solve anyway\n";

    RobustFixedPoint fp;
    try {
        fp = robust_rvi_oracle(mdp, policy, spec, cfg.td.oracle_tol, cfg.td.oracle_max_iters,
                               cfg.td.anchor);
    } catch (const ConvergenceError& err) {
        log << "oracle failed to converge: " << err.what() << "\n";
        return kExitNoConvergence;
    }

    TdConfig td;
    td.horizon = cfg.td.horizon;
    td.value_step = {cfg.td.value_step_c, cfg.td.value_step_k};
    td.gain_step = {cfg.td.gain_step_c, cfg.td.gain_step_k};
    td.anchor = cfg.td.anchor;
    td.mlmc = MlmcConfig{cfg.mlmc.n_max};
    td.seed = cfg.run.seed;
    td.trace_points = cfg.td.trace_points;

    const ValuePhaseResult value = td_value_phase(mdp, policy, spec, td, &fp.v_star);
    const GainPhaseResult gain =
        td_gain_phase(mdp, policy, spec, value.v, td, &fp.g_star);

    // Value-phase rows first (g_error empty), then gain-phase rows (v_error
    // empty); sample counts accumulate over the whole run.
    CsvTable traces({"t", "v_error", "g_error", "cumulative_samples"});
    for (const TracePoint& pt : value.trace)
        traces.add_row({std::to_string(pt.t), fmt(pt.error), "",
                        std::to_string(pt.cumulative_samples)});
    for (const TracePoint& pt : gain.trace)
        traces.add_row({std::to_string(pt.t), "", fmt(pt.error),
                        std::to_string(value.samples_consumed + pt.cumulative_samples)});
    write_output(cfg.run.out, traces.to_string());

    const double v_error =
        (value.v.values - fp.v_star.values).lpNorm<Eigen::Infinity>();
    const double g_error = std::abs(gain.g - fp.g_star);
    const long total_samples = value.samples_consumed + gain.samples_consumed;

    CsvTable summary({"kind", "delta", "T", "seed", "v_final_error", "g_final_error",
                      "samples"});
    summary.add_row({to_string(spec.kind), fmt(spec.delta), std::to_string(cfg.td.horizon),
                     std::to_string(cfg.run.seed), fmt(v_error), fmt(g_error),
                     std::to_string(total_samples)});
    write_output(cfg.run.out.empty() ? "" : cfg.run.out + ".summary.csv",
                 summary.to_string());

    if (v_error > cfg.td.v_error_threshold || g_error > cfg.td.g_error_threshold) {
        log << "final errors above thresholds: v " << fmt(v_error) << " g " << fmt(g_error)
            << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_oracle_solve(const ExperimentConfig& cfg, std::ostream& log) {
    const TabularMdp mdp = build_mdp(cfg);
    const Policy policy = build_policy(cfg, mdp);
    const UncertaintySpec spec = build_uncertainty(cfg, mdp.n_states);

    const RadiusCertificate cert = radius_certificate(induced_kernel(mdp, policy), spec);
    if (!cert.satisfied)
        log << "warning: radius certificate not satisfied (threshold "
            << fmt(cert.threshold) << "); attempting the solve anyway\n";

    RobustFixedPoint fp;
    try {
        fp = robust_rvi_oracle(mdp, policy, spec, cfg.td.oracle_tol, cfg.td.oracle_max_iters,
                               cfg.td.anchor);
    } catch (const ConvergenceError& err) {
        log << "oracle failed to converge: " << err.what() << "\n";
        return kExitNoConvergence;
    }

    log << "g_star = " << fmt(fp.g_star) << "\n"
        << "residual = " << fmt(fp.residual) << "\n"
        << "iterations = " << fp.iterations << "\n"
        << "certificate: m = " << cert.m << ", b0 = " << fmt(cert.b0) << ", threshold = "
        << fmt(cert.threshold) << ", satisfied = " << (cert.satisfied ? "true" : "false")
        << "\n";

    std::vector<std::string> header{"kind",   "delta",          "g_star",
                                    "residual", "iterations",   "cert_m",
                                    "cert_b0", "cert_threshold", "cert_satisfied"};
    std::vector<std::string> row{to_string(spec.kind),
                                 fmt(spec.delta),
                                 fmt(fp.g_star),
                                 fmt(fp.residual),
                                 std::to_string(fp.iterations),
                                 std::to_string(cert.m),
                                 fmt(cert.b0),
                                 fmt(cert.threshold),
                                 cert.satisfied ? "true" : "false"};
    for (int s = 0; s < mdp.n_states; ++s) {
        header.push_back("v" + std::to_string(s));
        row.push_back(fmt(fp.v_star.values[s]));
    }
    CsvTable table(header);
    table.add_row(row);
    write_output(cfg.run.out, table.to_string());
    return kExitOk;
}

} // namespace ravel
