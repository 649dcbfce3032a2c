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

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ravel/errors.hpp"
#include "ravel/harness.hpp"
#include "ravel/presets.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string preset;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    bool threads_set = false;
};

ravel::ExperimentConfig resolve_config(const GlobalArgs& args) {
    if (!args.config_path.empty() && !args.preset.empty())
        throw ravel::ConfigError("--config and --preset are mutually exclusive");
    ravel::ExperimentConfig cfg;
    if (!args.config_path.empty())
        cfg = ravel::load_config_file(args.config_path);
    else if (!args.preset.empty())
        cfg = ravel::parse_config(ravel::preset_text(args.preset));
    else
        throw ravel::ConfigError("one of --config or --preset is required");
    if (args.seed_set) cfg.run.seed = args.seed;
    if (args.threads_set) cfg.run.threads = args.threads;
    if (!args.out.empty()) cfg.run.out = args.out;
    return cfg;
}

void add_common_options(CLI::App* cmd, GlobalArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config file");
    cmd->add_option("--preset", args.preset, "Bundled preset name");
    cmd->add_option("--out", args.out, "Output CSV path (default: stdout)");
    cmd->add_option("--seed", args.seed, "Master seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "Worker cap (output-invariant)")
        ->each([&args](const std::string&) { args.threads_set = true; });
}

int dispatch(const GlobalArgs& args,
             const std::function<int(const ravel::ExperimentConfig&, std::ostream&)>& fn) {
    try {
        const ravel::ExperimentConfig cfg = resolve_config(args);
        return fn(cfg, std::cerr);
    } catch (const ravel::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return ravel::kExitConfig;
    } catch (const ravel::ConvergenceError& err) {
        std::cerr << "did not converge: " << err.what() << "\n";
        return ravel::kExitNoConvergence;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return ravel::kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust average-reward MDP policy evaluation toolkit"};
    app.require_subcommand(1);

    GlobalArgs args;
    int exit_code = 0;

    auto* validate = app.add_subcommand(
        "validate-contraction", "Empirical one-step contraction tables");
    add_common_options(validate, args);
    validate->callback([&] { exit_code = dispatch(args, ravel::cmd_validate_contraction); });

    auto* eval = app.add_subcommand(
        "eval-support", "Exact support functions vs. the LP oracle");
    add_common_options(eval, args);
    eval->callback([&] { exit_code = dispatch(args, ravel::cmd_eval_support); });

    auto* stats = app.add_subcommand(
        "mlmc-stats", "Truncated-estimator sample/bias/variance grid");
    add_common_options(stats, args);
    stats->callback([&] { exit_code = dispatch(args, ravel::cmd_mlmc_stats); });

    auto* td = app.add_subcommand("td-run", "Two-phase robust TD with traces");
    add_common_options(td, args);
    td->callback([&] { exit_code = dispatch(args, ravel::cmd_td_run); });

    auto* oracle = app.add_subcommand(
        "oracle-solve", "Robust relative value iteration fixed point");
    add_common_options(oracle, args);
    oracle->callback([&] { exit_code = dispatch(args, ravel::cmd_oracle_solve); });

    auto* presets = app.add_subcommand("list-presets", "Show bundled preset names");
    presets->callback([&] {
        for (const std::string& name : ravel::preset_names()) std::cout << name << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
