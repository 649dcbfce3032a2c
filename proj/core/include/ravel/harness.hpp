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

#include <iosfwd>

#include "ravel/config.hpp"

namespace ravel {

// Exit-code contract shared by all commands:
//   0 success, 1 property violation, 2 configuration error,
//   3 solver non-convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConvergence = 3;

/// Runs the contraction tables: one CSV row per configured kernel. Exit 0
/// iff every probe ratio stays below the construction's contraction factor
/// and, when golden columns are present, the deterministic columns match.
int cmd_validate_contraction(const ExperimentConfig& cfg, std::ostream& log);

/// Exact solver vs. LP oracle on every (s, a) row of the configured MDP for
/// the configured value vector. Exit 1 when any |difference| exceeds 1e-8.
/// Above the oracle's state cap the oracle column is omitted with a warning.
int cmd_eval_support(const ExperimentConfig& cfg, std::ostream& log);

/// Estimator statistics over the n_max grid: sample accounting, bias and
/// variance per level. Exit 1 when the mean sample count strays more than 1%
/// from n_max + 2 with at least 1e5 replications.
int cmd_mlmc_stats(const ExperimentConfig& cfg, std::ostream& log);

/// Full pipeline: RVI ground truth, value phase, gain phase, trace CSV plus
/// a summary CSV (written next to the trace file with a .summary.csv
/// suffix, or to stdout). Exit 3 when the oracle fails to converge, 1 when
/// a final error exceeds its configured threshold.
int cmd_td_run(const ExperimentConfig& cfg, std::ostream& log);

/// Solves the fixed point alone and reports g*, v*, the Bellman residual
/// and the radius-certificate status.
int cmd_oracle_solve(const ExperimentConfig& cfg, std::ostream& log);

} // namespace ravel
