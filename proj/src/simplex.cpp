#include "gstft/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gstft {
namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr int kMaxIters = 20000;

struct Tableau {
    // rows: m constraint rows, then the objective row.
    // cols: nv variable columns, then RHS.
    int m = 0;
    int nv = 0;
    std::vector<Vec> t;
    std::vector<int> basis;  // basis[i] = variable index basic in row i

    double& at(int i, int j) { return t[i][j]; }
    double rhs(int i) const { return t[i][nv]; }
    double obj(int j) const { return t[m][j]; }

    void pivot(int row, int col) {
        const double p = t[row][col];
        for (int j = 0; j <= nv; ++j) t[row][j] /= p;
        t[row][col] = 1.0;  // kill roundoff on the pivot itself
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            const double f = t[i][col];
            if (std::fabs(f) < kPivotTol) {
                t[i][col] = 0.0;
                continue;
            }
            for (int j = 0; j <= nv; ++j) t[i][j] -= f * t[row][j];
            t[i][col] = 0.0;
        }
        basis[row] = col;
    }

    // Bland: entering = smallest column index with negative reduced cost,
    // leaving = min ratio with smallest basic variable index on ties.
    // Returns Optimal when no entering column, Unbounded when a column
    // has no positive pivot.
    LpStatus run(const std::vector<bool>& allowed) {
        for (int iter = 0; iter < kMaxIters; ++iter) {
            int enter = -1;
            for (int j = 0; j < nv; ++j) {
                if (!allowed[j]) continue;
                if (t[m][j] < -kCostTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            int leave = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                const double a = t[i][enter];
                if (a <= kPivotTol) continue;
                const double ratio = t[i][nv] / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
        throw GuardError("simplex iteration cap exceeded");
    }
};

}  // namespace

LpResult lp_solve(const std::vector<Vec>& A, const Vec& b, const Vec& c) {
    const int m = static_cast<int>(A.size());
    const int d = static_cast<int>(c.size());
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != d)
            throw ConfigError("lp_solve: ragged constraint matrix");
    if (static_cast<int>(b.size()) != m)
        throw ConfigError("lp_solve: b size mismatch");

    // Split x = x+ - x-: structural columns 0..2d-1, then m slacks, then
    // artificials for rows whose RHS had to be flipped nonnegative.
    const int ns = 2 * d;
    std::vector<int> art_of_row(m, -1);
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (b[i] < 0.0) art_of_row[i] = n_art++;
    const int nv = ns + m + n_art;

    Tableau tb;
    tb.m = m;
    tb.nv = nv;
    tb.t.assign(m + 1, Vec(nv + 1, 0.0));
    tb.basis.assign(m, -1);

    for (int i = 0; i < m; ++i) {
        const double sign = (b[i] < 0.0) ? -1.0 : 1.0;
        for (int j = 0; j < d; ++j) {
            tb.at(i, j) = sign * A[i][j];
            tb.at(i, d + j) = -sign * A[i][j];
        }
        tb.at(i, ns + i) = sign;  // slack
        tb.at(i, nv) = sign * b[i];
        if (art_of_row[i] >= 0) {
            tb.at(i, ns + m + art_of_row[i]) = 1.0;
            tb.basis[i] = ns + m + art_of_row[i];
        } else {
            tb.basis[i] = ns + i;
        }
    }

    std::vector<bool> allowed(nv, true);

    if (n_art > 0) {
        // Phase 1: minimize the artificial sum, i.e. maximize -sum(art).
        for (int j = 0; j < n_art; ++j) tb.at(m, ns + m + j) = 1.0;
        // Price out the artificial basis rows.
        for (int i = 0; i < m; ++i) {
            if (art_of_row[i] < 0) continue;
            for (int j = 0; j <= nv; ++j) tb.at(m, j) -= tb.at(i, j);
        }
        LpStatus st = tb.run(allowed);
        if (st != LpStatus::Optimal)
            throw GuardError("simplex phase 1 did not terminate normally");
        if (tb.at(m, nv) < -1e-7) return {LpStatus::Infeasible, 0.0, {}};

        // Drive any artificial still basic out of the basis (degenerate
        // zero rows are left in place; their row is all-zero on the
        // allowed columns and never pivots again).
        for (int i = 0; i < m; ++i) {
            if (tb.basis[i] < ns + m) continue;
            int col = -1;
            for (int j = 0; j < ns + m; ++j)
                if (std::fabs(tb.at(i, j)) > 1e-8) {
                    col = j;
                    break;
                }
            if (col >= 0) tb.pivot(i, col);
        }
        for (int j = 0; j < n_art; ++j) allowed[ns + m + j] = false;
        // Reset objective row for phase 2.
        for (int j = 0; j <= nv; ++j) tb.at(m, j) = 0.0;
    }

    // Phase 2 objective: max c·(x+ - x-)  ->  objective row holds -c.
    for (int j = 0; j < d; ++j) {
        tb.at(m, j) = -c[j];
        tb.at(m, d + j) = c[j];
    }
    // Price out basic columns.
    for (int i = 0; i < m; ++i) {
        const int bj = tb.basis[i];
        const double f = tb.at(m, bj);
        if (std::fabs(f) < kPivotTol) continue;
        for (int j = 0; j <= nv; ++j) tb.at(m, j) -= f * tb.t[i][j];
        tb.at(m, bj) = 0.0;
    }

    LpStatus st = tb.run(allowed);
    if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, 0.0, {}};

    Vec x(d, 0.0);
    for (int i = 0; i < m; ++i) {
        const int bj = tb.basis[i];
        if (bj < d)
            x[bj] += tb.rhs(i);
        else if (bj < 2 * d)
            x[bj - d] -= tb.rhs(i);
    }
    return {LpStatus::Optimal, dot(c, x), x};
}

LpResult lp_maximize(const std::vector<Vec>& A, const Vec& b, const Vec& c) {
    LpResult r = lp_solve(A, b, c);
    if (r.status == LpStatus::Infeasible)
        throw ConfigError("lp_maximize: infeasible program");
    if (r.status == LpStatus::Unbounded)
        throw ConfigError("lp_maximize: unbounded program");
    return r;
}

}  // namespace gstft
