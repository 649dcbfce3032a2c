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

#include "ravel/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ravel {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau rows are constraints; columns are structural + slack + artificial
// variables with the right-hand side last. basis[r] is the variable occupying
// row r.
struct Tableau {
    Eigen::MatrixXd t;
    std::vector<int> basis;

    int rows() const { return static_cast<int>(t.rows()); }
    int cols() const { return static_cast<int>(t.cols()) - 1; }
    double rhs(int r) const { return t(r, t.cols() - 1); }

    void pivot(int r, int c) {
        t.row(r) /= t(r, c);
        for (int i = 0; i < rows(); ++i) {
            if (i == r) continue;
            const double factor = t(i, c);
            if (factor != 0.0) t.row(i) -= factor * t.row(r);
        }
        basis[r] = c;
    }
};

// Minimizes the canonical reduced-cost row obj over columns [0, n_enter)
// using Bland's rule. Returns false when unbounded below.
bool run_simplex(Tableau& tab, Eigen::RowVectorXd& obj, int n_enter) {
    const int m = tab.rows();
    for (;;) {
        int entering = -1;
        for (int j = 0; j < n_enter; ++j) {
            if (obj(j) < -kPivotTol) {
                entering = j; // Bland: lowest eligible index
                break;
            }
        }
        if (entering < 0) return true;

        int leaving = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double a = tab.t(i, entering);
            if (a > kPivotTol) {
                const double ratio = tab.rhs(i) / a;
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol &&
                     (leaving < 0 || tab.basis[i] < tab.basis[leaving]))) {
                    best_ratio = std::min(best_ratio, ratio);
                    leaving = i;
                }
            }
        }
        if (leaving < 0) return false;

        tab.pivot(leaving, entering);
        const double coef = obj(entering);
        if (coef != 0.0) obj -= coef * tab.t.row(leaving).head(obj.size()).eval();
    }
}

} // namespace

LpResult solve_lp(const LinearProgram& lp) {
    const int n = static_cast<int>(lp.c.size());
    const int m_eq = static_cast<int>(lp.a_eq.rows());
    const int m_ub = static_cast<int>(lp.a_ub.rows());
    const int m = m_eq + m_ub;
    if (m_eq > 0 && lp.a_eq.cols() != n)
        throw std::invalid_argument("solve_lp: a_eq shape mismatch");
    if (m_ub > 0 && lp.a_ub.cols() != n)
        throw std::invalid_argument("solve_lp: a_ub shape mismatch");

    // Columns: n structural, m_ub slacks, m artificials, then RHS.
    const int n_slack = m_ub;
    const int n_real = n + n_slack;
    const int total = n_real + m;

    Tableau tab;
    tab.t = Eigen::MatrixXd::Zero(m, total + 1);
    tab.basis.assign(m, -1);

    for (int i = 0; i < m_eq; ++i) {
        tab.t.block(i, 0, 1, n) = lp.a_eq.row(i);
        tab.t(i, total) = lp.b_eq(i);
    }
    for (int i = 0; i < m_ub; ++i) {
        const int r = m_eq + i;
        tab.t.block(r, 0, 1, n) = lp.a_ub.row(i);
        tab.t(r, n + i) = 1.0;
        tab.t(r, total) = lp.b_ub(i);
    }
    for (int r = 0; r < m; ++r)
        if (tab.rhs(r) < 0.0) tab.t.row(r) = -tab.t.row(r);
    for (int r = 0; r < m; ++r) {
        tab.t(r, n_real + r) = 1.0;
        tab.basis[r] = n_real + r;
    }

    LpResult res;

    // Phase 1: minimize the artificial sum. Canonicalize the cost row against
    // the all-artificial starting basis.
    Eigen::RowVectorXd phase1 = Eigen::RowVectorXd::Zero(total);
    phase1.segment(n_real, m).setOnes();
    for (int r = 0; r < m; ++r) phase1 -= tab.t.row(r).head(total).eval();

    if (!run_simplex(tab, phase1, total))
        throw std::runtime_error("solve_lp: phase 1 unbounded (internal error)");

    double art_sum = 0.0;
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] >= n_real) art_sum += tab.rhs(r);
    if (art_sum > 1e-8) {
        res.feasible = false;
        return res;
    }
    // Drive degenerate artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] >= n_real) {
            for (int j = 0; j < n_real; ++j) {
                if (std::abs(tab.t(r, j)) > kPivotTol) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
    }

    // Phase 2: original objective over structural + slack columns only.
    Eigen::RowVectorXd phase2 = Eigen::RowVectorXd::Zero(total);
    phase2.head(n) = lp.c.transpose();
    for (int r = 0; r < m; ++r) {
        const int b = tab.basis[r];
        const double coef = phase2(b);
        if (coef != 0.0) phase2 -= coef * tab.t.row(r).head(total).eval();
    }

    res.feasible = true;
    if (!run_simplex(tab, phase2, n_real)) {
        res.bounded = false;
        return res;
    }
    res.bounded = true;
    res.x = Eigen::VectorXd::Zero(n);
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) res.x(tab.basis[r]) = tab.rhs(r);
    res.objective = lp.c.dot(res.x);
    return res;
}

} // namespace ravel
