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

#include "ravel/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ravel/lp.hpp"
#include "ravel/parallel.hpp"

namespace ravel {

namespace {

// Euclidean projection onto the probability simplex (sorting algorithm).
Vector project_to_simplex(const Vector& y) {
    const int n = static_cast<int>(y.size());
    std::vector<double> u(y.data(), y.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += u[i];
        const double candidate = (cum - 1.0) / (i + 1);
        if (u[i] - candidate > 0.0) theta = candidate;
    }
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = std::max(y[i] - theta, 0.0);
    return x;
}

// Minimum transport cost between two distributions for the given cost matrix.
double min_transport_cost(const Vector& u, const Vector& v, const Matrix& cost) {
    const int n = static_cast<int>(u.size());
    LinearProgram lp;
    lp.c = Vector::Zero(n * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) lp.c[x * n + y] = cost(x, y);
    // Row marginals u, column marginals v. One equality is redundant; keep
    // all rows and let the simplex handle the degenerate row.
    lp.a_eq = Matrix::Zero(2 * n, n * n);
    lp.b_eq = Vector::Zero(2 * n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            lp.a_eq(x, x * n + y) = 1.0;
            lp.a_eq(n + y, x * n + y) = 1.0;
        }
        lp.b_eq[x] = u[x];
    }
    for (int y = 0; y < n; ++y) lp.b_eq[n + y] = v[y];
    const LpResult sol = solve_lp(lp);
    if (!sol.feasible || !sol.bounded)
        throw std::runtime_error("min_transport_cost: coupling LP failed");
    return sol.objective;
}

constexpr int kRejectionBudget = 10000;

} // namespace

FluctuationMatrix fluctuation_matrix(const InducedChain& chain) {
    const Vector d = stationary_distribution(chain); // throws on non-ergodic input
    const int n = chain.n_states();
    return FluctuationMatrix{chain.matrix - Vector::Ones(n) * d.transpose()};
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: non-square matrix");
    if (m.rows() == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    const Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double LyapunovNorm::eval(const Vector& x) const {
    return std::sqrt(std::max(0.0, x.dot(m * x)));
}

LyapunovNorm solve_discrete_lyapunov(const FluctuationMatrix& q, double alpha,
                                     double term_tol, long max_terms) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("solve_discrete_lyapunov: alpha must lie in (0, 1)");
    const double rho = spectral_radius(q.q);
    if (rho >= alpha)
        throw ConvergenceError("solve_discrete_lyapunov: series diverges, alpha <= rho(Q)", rho);

    const int n = static_cast<int>(q.q.rows());
    const Matrix b = q.q / alpha;
    Matrix term = Matrix::Identity(n, n); // (B^T)^k B^k, starting at k = 0
    Matrix sum = term;
    bool converged = false;
    for (long k = 1; k <= max_terms; ++k) {
        term = b.transpose() * term * b;
        sum += term;
        if (term.norm() < term_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("solve_discrete_lyapunov: term cap exceeded", term.norm());

    LyapunovNorm result;
    result.alpha = alpha;
    result.m = sum / (alpha * alpha);
    result.m = 0.5 * (result.m + result.m.transpose()).eval();
    result.residual =
        (q.q.transpose() * result.m * q.q - alpha * alpha * result.m + Matrix::Identity(n, n))
            .norm();
    if (result.residual > 1e-8)
        throw ConvergenceError("solve_discrete_lyapunov: residual too large", result.residual);
    return result;
}

double kernel_seminorm_eval(const KernelSeminorm& sn, const FluctuationMatrix& q,
                            const Vector& x) {
    if (x.size() != q.q.rows())
        throw std::invalid_argument("kernel_seminorm_eval: dimension mismatch");
    const Vector qx = q.q * x;
    // inf_c |x - c e|_Q has the closed form c* = (e^T M x) / (e^T M e).
    const Vector e = Vector::Ones(x.size());
    const Vector me = sn.lyapunov.m * e;
    const double c_star = me.dot(x) / me.dot(e);
    return sn.lyapunov.eval(qx) + sn.epsilon * sn.lyapunov.eval(x - c_star * e);
}

double dobrushin_coefficient(const Matrix& p) {
    const int n = static_cast<int>(p.rows());
    if (n == 0 || p.cols() != n)
        throw std::invalid_argument("dobrushin_coefficient: non-square matrix");
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (p(i, j) < -kStochasticTol)
                throw std::invalid_argument("dobrushin_coefficient: negative entry");
            sum += p(i, j);
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("dobrushin_coefficient: row does not sum to 1");
    }
    if (n == 1) return 0.0;
    double min_overlap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double overlap = 0.0;
            for (int s = 0; s < n; ++s) overlap += std::min(p(i, s), p(j, s));
            min_overlap = std::min(min_overlap, overlap);
        }
    return 1.0 - min_overlap;
}

double jsr_upper_bound(const std::vector<Matrix>& family, int m, int products_sampled,
                       Rng& rng) {
    if (family.empty()) throw std::invalid_argument("jsr_upper_bound: empty family");
    if (m < 1) throw std::invalid_argument("jsr_upper_bound: m must be positive");
    const std::size_t size = family.size();

    double exhaustive_count = 1.0;
    for (int i = 0; i < m; ++i) exhaustive_count *= static_cast<double>(size);
    const bool exhaustive = exhaustive_count <= 1e4;

    double worst_tau = 0.0;
    if (exhaustive) {
        std::vector<std::size_t> idx(m, 0);
        for (;;) {
            Matrix product = family[idx[0]];
            for (int k = 1; k < m; ++k) product = family[idx[k]] * product;
            worst_tau = std::max(worst_tau, dobrushin_coefficient(product));
            int pos = m - 1;
            while (pos >= 0 && ++idx[pos] == size) idx[pos--] = 0;
            if (pos < 0) break;
        }
    } else {
        for (int s = 0; s < products_sampled; ++s) {
            Matrix product = family[rng.uniform_index(size)];
            for (int k = 1; k < m; ++k) product = family[rng.uniform_index(size)] * product;
            worst_tau = std::max(worst_tau, dobrushin_coefficient(product));
        }
    }
    return std::pow(worst_tau, 1.0 / m);
}

RadiusCertificate radius_certificate(const InducedChain& nominal, const UncertaintySpec& spec) {
    if (!is_ergodic(nominal))
        throw NonErgodicError("radius_certificate: nominal chain is not ergodic");
    const int n = nominal.n_states();
    const long wielandt = static_cast<long>(n) * n - 2L * n + 2L;

    RadiusCertificate cert;
    Matrix power = nominal.matrix;
    for (long m = 1; m <= wielandt; ++m) {
        if (power.minCoeff() > 0.0) {
            cert.m = m;
            cert.b0 = power.minCoeff();
            double min_overlap = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    double overlap = 0.0;
                    for (int s = 0; s < n; ++s) overlap += std::min(power(i, s), power(j, s));
                    min_overlap = std::min(min_overlap, overlap);
                }
            cert.a0 = (n > 1) ? min_overlap : 1.0;
            break;
        }
        power = power * nominal.matrix;
    }
    if (cert.m == 0)
        throw NonErgodicError("radius_certificate: no positive power below the Wielandt bound");

    switch (spec.kind) {
        case UncertaintyKind::Contamination:
            cert.threshold = 1.0;
            cert.satisfied = spec.delta >= 0.0 && spec.delta < 1.0;
            break;
        case UncertaintyKind::TotalVariation:
            cert.threshold = cert.b0 / static_cast<double>(cert.m);
            cert.satisfied = spec.delta < cert.threshold;
            break;
        case UncertaintyKind::Wasserstein: {
            double delta_min = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) delta_min = std::min(delta_min, spec.metric(i, j));
            cert.threshold = delta_min * cert.b0 / static_cast<double>(cert.m);
            cert.satisfied = spec.delta < cert.threshold;
            break;
        }
    }
    return cert;
}

std::vector<Matrix> sample_uncertainty_family(const InducedChain& nominal,
                                              const UncertaintySpec& spec, int m_samples,
                                              Rng& rng) {
    if (m_samples < 1)
        throw std::invalid_argument("sample_uncertainty_family: m_samples must be positive");
    const int n = nominal.n_states();
    const double delta = spec.delta;

    double tv_radius = delta;
    Matrix cost;
    double w_budget = 0.0;
    if (spec.kind == UncertaintyKind::Wasserstein) {
        double delta_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) delta_min = std::min(delta_min, spec.metric(i, j));
        tv_radius = std::min(1.0, delta / delta_min);
        cost = Matrix(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cost(i, j) = std::pow(spec.metric(i, j), spec.power);
        w_budget = std::pow(delta, spec.power);
    }

    std::vector<Matrix> family;
    family.reserve(m_samples);
    for (int sample = 0; sample < m_samples; ++sample) {
        Matrix member(n, n);
        for (int row = 0; row < n; ++row) {
            const Vector center = nominal.matrix.row(row).transpose();
            if (spec.kind == UncertaintyKind::Contamination) {
                member.row(row) =
                    ((1.0 - delta) * center + delta * rng.simplex(n)).transpose();
                continue;
            }
            bool accepted = false;
            for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
                // Random zero-sum direction with unit TV size, scaled inside
                // the radius, then projected back onto the simplex.
                Vector dir(n);
                for (int j = 0; j < n; ++j) dir[j] = rng.normal();
                dir.array() -= dir.mean();
                const double tv_size = 0.5 * dir.lpNorm<1>();
                if (tv_size < 1e-12) continue;
                dir *= rng.uniform(0.0, tv_radius) / tv_size;
                const Vector candidate = project_to_simplex(center + dir);
                if (0.5 * (candidate - center).lpNorm<1>() > tv_radius + 1e-12) continue;
                if (spec.kind == UncertaintyKind::Wasserstein &&
                    min_transport_cost(center, candidate, cost) > w_budget + 1e-9)
                    continue;
                member.row(row) = candidate.transpose();
                accepted = true;
                break;
            }
            if (!accepted)
                throw std::runtime_error(
                    "sample_uncertainty_family: rejection budget exhausted");
        }
        family.push_back(std::move(member));
    }
    return family;
}

double ExtremalSurrogate::ext_norm(const Vector& z) const {
    double best = 0.0;
    for (const auto& [k, product] : library) {
        const double value = std::pow(alpha, -k) * (product * z).norm();
        best = std::max(best, value);
    }
    return best;
}

ExtremalSurrogate build_extremal_surrogate(const std::vector<Matrix>& family, int max_len,
                                           int samples_per_k, double epsilon_fraction,
                                           Rng& rng) {
    if (family.empty())
        throw std::invalid_argument("build_extremal_surrogate: empty family");
    if (max_len < 0)
        throw std::invalid_argument("build_extremal_surrogate: max_len must be nonnegative");
    if (samples_per_k < 1)
        throw std::invalid_argument("build_extremal_surrogate: samples_per_k must be positive");
    if (!(epsilon_fraction > 0.0 && epsilon_fraction < 1.0))
        throw std::invalid_argument("build_extremal_surrogate: epsilon_fraction in (0,1)");

    ExtremalSurrogate sur;
    const int n = static_cast<int>(family[0].rows());
    for (const Matrix& p : family) {
        const FluctuationMatrix q = fluctuation_matrix(InducedChain(p));
        sur.r_hat = std::max(sur.r_hat, spectral_radius(q.q));
        sur.family_q.push_back(q.q);
    }
    sur.alpha = std::min(0.99, 0.5 * (1.0 + sur.r_hat));
    sur.epsilon = epsilon_fraction * (1.0 - sur.alpha);
    sur.gamma = sur.alpha + sur.epsilon;

    sur.library.emplace_back(0, Matrix::Identity(n, n));
    const std::size_t size = sur.family_q.size();
    for (int k = 1; k <= max_len; ++k) {
        double exhaustive_count = 1.0;
        for (int i = 0; i < k; ++i) exhaustive_count *= static_cast<double>(size);
        if (exhaustive_count <= static_cast<double>(samples_per_k)) {
            std::vector<std::size_t> idx(k, 0);
            for (;;) {
                Matrix product = sur.family_q[idx[0]];
                for (int j = 1; j < k; ++j) product = sur.family_q[idx[j]] * product;
                sur.library.emplace_back(k, std::move(product));
                int pos = k - 1;
                while (pos >= 0 && ++idx[pos] == size) idx[pos--] = 0;
                if (pos < 0) break;
            }
        } else {
            for (int s = 0; s < samples_per_k; ++s) {
                Matrix product = sur.family_q[rng.uniform_index(size)];
                for (int j = 1; j < k; ++j)
                    product = sur.family_q[rng.uniform_index(size)] * product;
                sur.library.emplace_back(k, std::move(product));
            }
        }
    }
    return sur;
}

double robust_seminorm_eval(const ExtremalSurrogate& sur, const Vector& x) {
    if (sur.family_q.empty())
        throw std::invalid_argument("robust_seminorm_eval: empty surrogate");
    if (x.size() != sur.family_q[0].rows())
        throw std::invalid_argument("robust_seminorm_eval: dimension mismatch");

    double sup_term = 0.0;
    for (const Matrix& q : sur.family_q)
        sup_term = std::max(sup_term, sur.ext_norm(q * x));

    // Every positive-length product ends in some Q_i and therefore kills
    // c e, so only the k = 0 (identity) entry depends on c; the inner inf
    // is max(|x - mean(x) e|_2, positive-length part) exactly.
    double tail = 0.0;
    for (const auto& [k, product] : sur.library) {
        if (k == 0) continue;
        tail = std::max(tail, std::pow(sur.alpha, -k) * (product * x).norm());
    }
    const Vector centered = x.array() - x.mean();
    const double quotient = std::max(centered.norm(), tail);

    return sup_term + sur.epsilon * quotient;
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto idx = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(sorted.size() - 1)));
    return sorted[std::min(idx, sorted.size() - 1)];
}

} // namespace

ContractionRow contraction_experiment(const std::string& label, const InducedChain& nominal,
                                      const ContractionExperimentConfig& cfg) {
    ContractionRow row;
    row.label = label;
    row.n = nominal.n_states();
    row.robust = cfg.robust;

    Rng rng(cfg.seed);
    std::vector<double> ratios;
    std::vector<double> span_ratios;

    if (!cfg.robust) {
        const FluctuationMatrix q = fluctuation_matrix(nominal);
        row.rho_hat = spectral_radius(q.q);
        row.alpha = std::min(0.99, 0.5 * (1.0 + row.rho_hat));
        row.epsilon = cfg.epsilon_fraction * (1.0 - row.alpha);
        row.beta_or_gamma = row.alpha + row.epsilon;
        KernelSeminorm sn{solve_discrete_lyapunov(q, row.alpha), row.epsilon,
                          row.beta_or_gamma};

        const std::uint64_t probe_master = rng.next_u64();
        struct Probe {
            double ratio;
            double span_ratio;
            bool valid;
        };
        const auto probes = parallel_map<Probe>(cfg.probes, cfg.n_threads, [&](std::int64_t i) {
            Rng local(derive_seed(probe_master, static_cast<std::uint64_t>(i)));
            const Vector x = local.unit_sphere(row.n);
            const Vector px = nominal.matrix * x;
            const double den = kernel_seminorm_eval(sn, q, x);
            Probe p{0.0, 0.0, false};
            const double span_x = span_seminorm(x);
            if (span_x > 1e-12) p.span_ratio = span_seminorm(px) / span_x;
            if (den >= 1e-9) {
                p.ratio = kernel_seminorm_eval(sn, q, px) / den;
                p.valid = true;
            }
            return p;
        });
        for (const auto& p : probes) {
            if (p.valid) ratios.push_back(p.ratio);
            span_ratios.push_back(p.span_ratio);
        }
    } else {
        const auto family = sample_uncertainty_family(nominal, cfg.spec, cfg.family_size, rng);
        const ExtremalSurrogate sur = build_extremal_surrogate(
            family, cfg.max_len, cfg.samples_per_k, cfg.epsilon_fraction, rng);
        row.delta = cfg.spec.delta;
        row.family_size = cfg.family_size;
        row.max_len = cfg.max_len;
        row.samples_per_k = cfg.samples_per_k;
        row.rho_hat = sur.r_hat;
        row.alpha = sur.alpha;
        row.epsilon = sur.epsilon;
        row.beta_or_gamma = sur.gamma;

        const std::uint64_t probe_master = rng.next_u64();
        const std::int64_t total =
            static_cast<std::int64_t>(family.size()) * cfg.probes_per_kernel;
        struct Probe {
            double ratio;
            double span_ratio;
            bool valid;
        };
        const auto probes = parallel_map<Probe>(total, cfg.n_threads, [&](std::int64_t i) {
            Rng local(derive_seed(probe_master, static_cast<std::uint64_t>(i)));
            const Matrix& p_matrix = family[static_cast<std::size_t>(i) / cfg.probes_per_kernel];
            const Vector x = local.unit_sphere(row.n);
            const Vector px = p_matrix * x;
            const double den = robust_seminorm_eval(sur, x);
            Probe p{0.0, 0.0, false};
            const double span_x = span_seminorm(x);
            if (span_x > 1e-12) p.span_ratio = span_seminorm(px) / span_x;
            if (den >= 1e-9) {
                p.ratio = robust_seminorm_eval(sur, px) / den;
                p.valid = true;
            }
            return p;
        });
        for (const auto& p : probes) {
            if (p.valid) ratios.push_back(p.ratio);
            span_ratios.push_back(p.span_ratio);
        }
    }

    if (ratios.empty())
        throw std::runtime_error("contraction_experiment: all probes fell in the kernel");
    std::sort(ratios.begin(), ratios.end());
    row.ratio_min = ratios.front();
    row.ratio_max = ratios.back();
    row.ratio_median = nearest_rank(ratios, 0.5);
    row.ratio_p90 = nearest_rank(ratios, 0.9);
    row.max_span_ratio = *std::max_element(span_ratios.begin(), span_ratios.end());
    row.probes_used = static_cast<long>(ratios.size());
    return row;
}

} // namespace ravel
