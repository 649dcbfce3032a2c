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

#include "ravel/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ravel/lp.hpp"

namespace ravel {

namespace {

void require_simplex(const Vector& p, const char* what) {
    if (p.size() == 0) throw std::invalid_argument(std::string(what) + ": empty center");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] < -1e-9)
            throw std::invalid_argument(std::string(what) + ": negative center entry");
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(what) + ": center does not sum to 1");
}

int argmin_lowest_index(const Vector& v) {
    int best = 0;
    for (int i = 1; i < v.size(); ++i)
        if (v[i] < v[best]) best = i;
    return best;
}

} // namespace

std::string to_string(UncertaintyKind kind) {
    switch (kind) {
        case UncertaintyKind::Contamination: return "contamination";
        case UncertaintyKind::TotalVariation: return "tv";
        case UncertaintyKind::Wasserstein: return "wasserstein";
    }
    return "unknown";
}

UncertaintyKind uncertainty_kind_from_string(const std::string& name) {
    if (name == "contamination") return UncertaintyKind::Contamination;
    if (name == "tv" || name == "total_variation") return UncertaintyKind::TotalVariation;
    if (name == "wasserstein") return UncertaintyKind::Wasserstein;
    throw std::invalid_argument("unknown uncertainty kind: " + name);
}

void validate_metric(const Matrix& metric) {
    const int n = static_cast<int>(metric.rows());
    if (n == 0 || metric.cols() != n)
        throw std::invalid_argument("metric must be square and nonempty");
    for (int i = 0; i < n; ++i) {
        if (std::abs(metric(i, i)) > 1e-15)
            throw std::invalid_argument("metric diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            if (metric(i, j) < 0.0)
                throw std::invalid_argument("metric entries must be nonnegative");
            if (i != j && metric(i, j) <= 0.0)
                throw std::invalid_argument("metric must be positive off the diagonal");
            if (std::abs(metric(i, j) - metric(j, i)) > 1e-12)
                throw std::invalid_argument("metric must be symmetric");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (metric(i, j) > metric(i, k) + metric(k, j) + 1e-12)
                    throw std::invalid_argument("metric violates the triangle inequality");
}

UncertaintySpec UncertaintySpec::contamination(double delta) {
    if (delta < 0.0 || delta >= 1.0)
        throw std::invalid_argument("contamination radius must lie in [0, 1)");
    UncertaintySpec s;
    s.kind = UncertaintyKind::Contamination;
    s.delta = delta;
    return s;
}

UncertaintySpec UncertaintySpec::total_variation(double delta) {
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("TV radius must lie in [0, 1]");
    UncertaintySpec s;
    s.kind = UncertaintyKind::TotalVariation;
    s.delta = delta;
    return s;
}

UncertaintySpec UncertaintySpec::wasserstein(double delta, Matrix metric, double power) {
    if (delta < 0.0) throw std::invalid_argument("Wasserstein radius must be nonnegative");
    if (power < 1.0) throw std::invalid_argument("Wasserstein power must be at least 1");
    validate_metric(metric);
    UncertaintySpec s;
    s.kind = UncertaintyKind::Wasserstein;
    s.delta = delta;
    s.metric = std::move(metric);
    s.power = power;
    return s;
}

SupportResult support_contamination(const Vector& p, const Vector& v, double delta) {
    require_simplex(p, "support_contamination");
    if (delta < 0.0 || delta >= 1.0)
        throw std::invalid_argument("support_contamination: radius must lie in [0, 1)");
    if (p.size() != v.size())
        throw std::invalid_argument("support_contamination: dimension mismatch");
    const int target = argmin_lowest_index(v);
    SupportResult res;
    res.value = (1.0 - delta) * p.dot(v) + delta * v[target];
    res.minimizer = (1.0 - delta) * p;
    res.minimizer[target] += delta;
    res.has_minimizer = true;
    return res;
}

SupportResult support_tv_greedy(const Vector& p, const Vector& v, double delta) {
    require_simplex(p, "support_tv_greedy");
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("support_tv_greedy: radius must lie in [0, 1]");
    if (p.size() != v.size())
        throw std::invalid_argument("support_tv_greedy: dimension mismatch");
    const int n = static_cast<int>(v.size());
    const int target = argmin_lowest_index(v);

    // Sources in decreasing v order, equal values by lowest state index.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (v[a] != v[b]) return v[a] > v[b];
        return a < b;
    });

    SupportResult res;
    res.minimizer = p;
    double budget = delta;
    for (int src : order) {
        if (budget <= 0.0) break;
        if (v[src] <= v[target]) break; // moving min-valued mass changes nothing
        const double move = std::min(budget, res.minimizer[src]);
        res.minimizer[src] -= move;
        res.minimizer[target] += move;
        budget -= move;
    }
    res.value = res.minimizer.dot(v);
    res.has_minimizer = true;
    return res;
}

double support_tv_dual(const Vector& p, const Vector& v, double delta) {
    require_simplex(p, "support_tv_dual");
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("support_tv_dual: radius must lie in [0, 1]");
    if (p.size() != v.size())
        throw std::invalid_argument("support_tv_dual: dimension mismatch");
    const int n = static_cast<int>(v.size());

    // Candidate thresholds: distinct values of v. With mu = (v - w e)_+ the
    // dual objective becomes p . min(v, w) - delta * span(min(v, w)), a
    // piecewise-linear function of w maximized at one of the breakpoints.
    std::vector<double> thresholds(v.data(), v.data() + n);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    double best = -std::numeric_limits<double>::infinity();
    Vector clipped(n);
    for (double w : thresholds) {
        for (int i = 0; i < n; ++i) clipped[i] = std::min(v[i], w);
        const double value = p.dot(clipped) - delta * span_seminorm(clipped);
        best = std::max(best, value);
    }
    return best;
}

SupportResult support_wasserstein(const Vector& p, const Vector& v, double delta,
                                  const Matrix& metric, double power) {
    require_simplex(p, "support_wasserstein");
    if (delta < 0.0)
        throw std::invalid_argument("support_wasserstein: radius must be nonnegative");
    if (power < 1.0)
        throw std::invalid_argument("support_wasserstein: power must be at least 1");
    validate_metric(metric);
    const int n = static_cast<int>(v.size());
    if (p.size() != n || metric.rows() != n)
        throw std::invalid_argument("support_wasserstein: dimension mismatch");

    SupportResult res;
    if (delta == 0.0) {
        res.value = p.dot(v);
        res.minimizer = p;
        res.has_minimizer = true;
        return res;
    }

    Matrix cost(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = std::pow(metric(i, j), power);
    const double budget = std::pow(delta, power);

    // h(lambda) = -lambda delta^l + sum_x p(x) min_y (v(y) + lambda c(x,y))
    // is concave piecewise-linear; its maximum sits at lambda = 0 or at a
    // crossing where some x switches its inner minimizer.
    std::vector<double> candidates{0.0};
    for (int x = 0; x < n; ++x) {
        if (p[x] <= 0.0) continue;
        for (int y1 = 0; y1 < n; ++y1)
            for (int y2 = 0; y2 < n; ++y2) {
                const double den = cost(x, y1) - cost(x, y2);
                if (den > 1e-15) {
                    const double lambda = (v[y2] - v[y1]) / den;
                    if (lambda > 0.0) candidates.push_back(lambda);
                }
            }
    }

    double best = -std::numeric_limits<double>::infinity();
    for (double lambda : candidates) {
        double value = -lambda * budget;
        for (int x = 0; x < n; ++x) {
            if (p[x] <= 0.0) continue;
            double inner = std::numeric_limits<double>::infinity();
            for (int y = 0; y < n; ++y)
                inner = std::min(inner, v[y] + lambda * cost(x, y));
            value += p[x] * inner;
        }
        best = std::max(best, value);
    }
    res.value = best;

    // Primal minimizer through the coupling LP at desk scale only.
    if (n <= kOracleMaxStates) {
        LinearProgram lp;
        lp.c = Vector::Zero(n * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) lp.c[x * n + y] = v[y];
        lp.a_eq = Matrix::Zero(n, n * n);
        lp.b_eq = p;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) lp.a_eq(x, x * n + y) = 1.0;
        lp.a_ub = Matrix::Zero(1, n * n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) lp.a_ub(0, x * n + y) = cost(x, y);
        lp.b_ub = Vector::Constant(1, budget);
        const LpResult sol = solve_lp(lp);
        if (sol.feasible && sol.bounded) {
            res.minimizer = Vector::Zero(n);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) res.minimizer[y] += sol.x[x * n + y];
            res.has_minimizer = true;
        }
    }
    return res;
}

double support_lp_oracle(const Vector& p, const Vector& v, const UncertaintySpec& spec) {
    require_simplex(p, "support_lp_oracle");
    const int n = static_cast<int>(v.size());
    if (p.size() != n) throw std::invalid_argument("support_lp_oracle: dimension mismatch");
    if (n > kOracleMaxStates)
        throw std::invalid_argument("support_lp_oracle: instance above the desk-scale cap");

    switch (spec.kind) {
        case UncertaintyKind::Contamination: {
            // Extreme points are (1-delta) p + delta e_s.
            double best = std::numeric_limits<double>::infinity();
            for (int s = 0; s < n; ++s)
                best = std::min(best, (1.0 - spec.delta) * p.dot(v) + spec.delta * v[s]);
            return best;
        }
        case UncertaintyKind::TotalVariation: {
            // Variables (q, t): min v.q subject to sum q = 1, sum t <= 2 delta,
            // q - t <= p, -q - t <= -p, q >= 0, t >= 0.
            LinearProgram lp;
            lp.c = Vector::Zero(2 * n);
            lp.c.head(n) = v;
            lp.a_eq = Matrix::Zero(1, 2 * n);
            lp.a_eq.row(0).head(n).setOnes();
            lp.b_eq = Vector::Constant(1, 1.0);
            lp.a_ub = Matrix::Zero(1 + 2 * n, 2 * n);
            lp.b_ub = Vector::Zero(1 + 2 * n);
            lp.a_ub.row(0).tail(n).setOnes();
            lp.b_ub[0] = 2.0 * spec.delta;
            for (int i = 0; i < n; ++i) {
                lp.a_ub(1 + i, i) = 1.0;
                lp.a_ub(1 + i, n + i) = -1.0;
                lp.b_ub[1 + i] = p[i];
                lp.a_ub(1 + n + i, i) = -1.0;
                lp.a_ub(1 + n + i, n + i) = -1.0;
                lp.b_ub[1 + n + i] = -p[i];
            }
            const LpResult sol = solve_lp(lp);
            if (!sol.feasible || !sol.bounded)
                throw std::runtime_error("support_lp_oracle: TV LP failed");
            return sol.objective;
        }
        case UncertaintyKind::Wasserstein: {
            Matrix cost(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    cost(i, j) = std::pow(spec.metric(i, j), spec.power);
            LinearProgram lp;
            lp.c = Vector::Zero(n * n);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) lp.c[x * n + y] = v[y];
            lp.a_eq = Matrix::Zero(n, n * n);
            lp.b_eq = p;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) lp.a_eq(x, x * n + y) = 1.0;
            lp.a_ub = Matrix::Zero(1, n * n);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) lp.a_ub(0, x * n + y) = cost(x, y);
            lp.b_ub = Vector::Constant(1, std::pow(spec.delta, spec.power));
            const LpResult sol = solve_lp(lp);
            if (!sol.feasible || !sol.bounded)
                throw std::runtime_error("support_lp_oracle: coupling LP failed");
            return sol.objective;
        }
    }
    throw std::logic_error("support_lp_oracle: unreachable");
}

SupportResult support_dispatch(const Vector& p, const Vector& v, const UncertaintySpec& spec) {
    switch (spec.kind) {
        case UncertaintyKind::Contamination:
            return support_contamination(p, v, spec.delta);
        case UncertaintyKind::TotalVariation:
            return support_tv_greedy(p, v, spec.delta);
        case UncertaintyKind::Wasserstein:
            return support_wasserstein(p, v, spec.delta, spec.metric, spec.power);
    }
    throw std::logic_error("support_dispatch: unreachable");
}

} // namespace ravel
