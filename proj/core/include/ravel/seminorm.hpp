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
#include <utility>
#include <vector>

#include "ravel/mdp.hpp"
#include "ravel/rng.hpp"
#include "ravel/uncertainty.hpp"

namespace ravel {

/// Q = P - e d^T where d is the stationary distribution. Annihilates
/// constant vectors; spectral radius equals the subdominant eigenvalue
/// modulus of P for ergodic chains.
struct FluctuationMatrix {
    Matrix q;
};

FluctuationMatrix fluctuation_matrix(const InducedChain& chain);

/// Largest eigenvalue modulus via a dense complex eigensolver.
double spectral_radius(const Matrix& m);

/// Quadratic norm |x|_Q = sqrt(x^T M x) from the discrete Lyapunov equation
/// Q^T M Q - alpha^2 M = -I, built as the truncated Neumann series
/// M = alpha^{-2} sum_k (B^T)^k B^k with B = Q / alpha.
struct LyapunovNorm {
    Matrix m;
    double alpha = 0.0;
    double residual = 0.0; // Frobenius norm of Q^T M Q - alpha^2 M + I

    double eval(const Vector& x) const;
};

/// Requires rho(Q) < alpha < 1; throws ConvergenceError when the series
/// diverges or the term cap (1e5) is exhausted.
LyapunovNorm solve_discrete_lyapunov(const FluctuationMatrix& q, double alpha,
                                     double term_tol = 1e-13, long max_terms = 100000);

/// Fixed-kernel contraction semi-norm |x|_P = |Q x|_Q + epsilon inf_c |x - c e|_Q
/// with one-step factor beta = alpha + epsilon < 1.
struct KernelSeminorm {
    LyapunovNorm lyapunov;
    double epsilon = 0.0;
    double beta = 0.0;
};

double kernel_seminorm_eval(const KernelSeminorm& sn, const FluctuationMatrix& q,
                            const Vector& x);

/// tau(P) = 1 - min_{i<j} sum_s min(P_is, P_js). Equals the operator norm of
/// P on the zero-sum subspace under the span semi-norm.
double dobrushin_coefficient(const Matrix& p);

/// Upper bound on the joint spectral radius of the fluctuation family via
/// Dobrushin coefficients of length-m products: (max over sampled products of
/// tau)^(1/m). Exhaustive when family_size^m <= 1e4, otherwise sampled.
double jsr_upper_bound(const std::vector<Matrix>& family, int m, int products_sampled,
                       Rng& rng);

/// Sufficient radius condition for the one-step contraction construction:
/// m is the smallest power with (P~)^m entrywise positive, b0 its smallest
/// entry. Contamination needs no restriction; TV needs delta < b0/m;
/// Wasserstein needs delta < delta_min b0 / m.
struct RadiusCertificate {
    long m = 0;
    double b0 = 0.0;
    double a0 = 0.0; // m-step pairwise-overlap constant of the nominal
    double threshold = 0.0;
    bool satisfied = false;
};

RadiusCertificate radius_certificate(const InducedChain& nominal, const UncertaintySpec& spec);

/// Draws row-stochastic members of the uncertainty ball around the nominal
/// chain. Contamination rows are exact mixture points; TV rows are random
/// zero-sum perturbations projected back to the simplex and accepted when
/// within radius; Wasserstein rows are TV-ball proposals at radius
/// delta/delta_min accepted when the coupling LP certifies the transport
/// budget.
std::vector<Matrix> sample_uncertainty_family(const InducedChain& nominal,
                                              const UncertaintySpec& spec, int m_samples,
                                              Rng& rng);

/// Finite-product surrogate of the extremal norm for a fluctuation family:
/// |z|_ext = max over the library of alpha^{-k} |M_{k,j} z|_2, with the
/// library holding sampled products of length k = 0..K.
struct ExtremalSurrogate {
    std::vector<Matrix> family_q; // Q_i per family member
    std::vector<std::pair<int, Matrix>> library; // (k, Q_{i_k} ... Q_{i_1})
    double r_hat = 0.0;   // max_i rho(Q_i)
    double alpha = 0.0;   // min{0.99, (1 + r_hat)/2}
    double epsilon = 0.0; // epsilon_fraction * (1 - alpha)
    double gamma = 0.0;   // alpha + epsilon

    double ext_norm(const Vector& z) const;
};

ExtremalSurrogate build_extremal_surrogate(const std::vector<Matrix>& family, int max_len,
                                           int samples_per_k, double epsilon_fraction,
                                           Rng& rng);

/// |x|_P = max_i |Q_i x|_ext + epsilon inf_c |x - c e|_ext. Every library
/// product of positive length annihilates e, so the quotient term reduces to
/// max(|x - mean(x) e|_2, A) with A the positive-length part of |x|_ext;
/// the infimum is exact.
double robust_seminorm_eval(const ExtremalSurrogate& sur, const Vector& x);

/// One row of the empirical contraction tables.
struct ContractionRow {
    std::string label;
    int n = 0;
    bool robust = false;
    double delta = 0.0;
    int family_size = 0;
    int max_len = 0;
    int samples_per_k = 0;
    double max_span_ratio = 0.0;
    double rho_hat = 0.0; // rho(Q) (non-robust) or max_i rho(Q_i) (robust)
    double alpha = 0.0;
    double epsilon = 0.0;
    double beta_or_gamma = 0.0;
    double ratio_min = 0.0;
    double ratio_median = 0.0;
    double ratio_p90 = 0.0;
    double ratio_max = 0.0;
    long probes_used = 0;
};

struct ContractionExperimentConfig {
    bool robust = false;
    UncertaintySpec spec;   // robust mode only
    int family_size = 30;
    int max_len = 3;
    int samples_per_k = 25;
    double epsilon_fraction = 0.25;
    int probes = 1000;           // non-robust probes
    int probes_per_kernel = 50;  // robust probes per sampled kernel
    std::uint64_t seed = 0;
    int n_threads = 1;
};

/// Builds the construction prescribed by the experiment recipe
/// (alpha = min{0.99, (1+rho)/2}, epsilon = 0.25 (1-alpha) unless configured
/// otherwise) and measures one-step ratios over random unit probes,
/// excluding near-kernel probes (denominator < 1e-9).
ContractionRow contraction_experiment(const std::string& label, const InducedChain& nominal,
                                      const ContractionExperimentConfig& cfg);

} // namespace ravel
