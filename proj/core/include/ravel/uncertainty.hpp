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

#include <string>

#include "ravel/mdp.hpp"

namespace ravel {

enum class UncertaintyKind { Contamination, TotalVariation, Wasserstein };

std::string to_string(UncertaintyKind kind);
UncertaintyKind uncertainty_kind_from_string(const std::string& name);

/// (s,a)-rectangular uncertainty ball description. Construct through the
/// factories, which validate the radius range and (for Wasserstein) that the
/// metric is symmetric, zero-diagonal, positive off the diagonal and obeys
/// the triangle inequality.
struct UncertaintySpec {
    UncertaintyKind kind = UncertaintyKind::Contamination;
    double delta = 0.0;
    Matrix metric; // Wasserstein only
    double power = 1.0;

    static UncertaintySpec contamination(double delta);
    static UncertaintySpec total_variation(double delta);
    static UncertaintySpec wasserstein(double delta, Matrix metric, double power = 1.0);
};

/// Checks the metric axioms; throws std::invalid_argument on violation.
void validate_metric(const Matrix& metric);

/// Value of the support function sigma(v) = min_{q in set} q^T v together
/// with an attaining distribution. For Wasserstein centers above the
/// desk-scale oracle cap only the value is available.
struct SupportResult {
    double value = 0.0;
    Vector minimizer;
    bool has_minimizer = false;
};

/// Largest state count the LP/vertex verification oracle accepts.
constexpr int kOracleMaxStates = 12;

/// Contamination: closed form (1-delta) p.v + delta min(v); the minimizer
/// places delta at the lowest-index argmin of v.
SupportResult support_contamination(const Vector& p, const Vector& v, double delta);

/// Exact greedy primal for the total-variation ball {q : 0.5 |q - p|_1 <=
/// delta}: moves up to delta of mass from the highest-v states onto the
/// lowest-index argmin of v.
SupportResult support_tv_greedy(const Vector& p, const Vector& v, double delta);

/// Dual value via the clipping-threshold scan mu_w = (v - w e)_+ with w over
/// the distinct values of v. Agrees with the greedy primal; kept as an
/// independent route for cross-validation.
double support_tv_dual(const Vector& p, const Vector& v, double delta);

/// Wasserstein ball: evaluates the concave piecewise-linear dual exactly by
/// enumerating the candidate lambda breakpoints (0 plus every pairwise
/// crossing with positive denominator).
SupportResult support_wasserstein(const Vector& p, const Vector& v, double delta,
                                  const Matrix& metric, double power);

/// Independent brute-force oracle: vertex enumeration (contamination) or a
/// dense LP (TV polytope / Wasserstein coupling). Desk scale only.
double support_lp_oracle(const Vector& p, const Vector& v, const UncertaintySpec& spec);

/// Routes to the exact solver for spec.kind.
SupportResult support_dispatch(const Vector& p, const Vector& v, const UncertaintySpec& spec);

} // namespace ravel
