#include "credal/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace credal {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-8;
constexpr long kMaxPivots = 1000000;
constexpr int kRefactorEvery = 48;

struct Tableau {
    int m = 0;       // rows
    int n_total = 0; // columns excluding rhs
    std::vector<std::vector<double>> a0; // original rows, m x (n_total + 1)
    std::vector<std::vector<double>> a;  // working tableau, m x (n_total + 1)
    std::vector<double> cost;            // current phase cost (minimization)
    std::vector<double> red;             // reduced costs, n_total + 1 (last = -objective)
    std::vector<int> basis;              // basis[i] = column basic in row i
    std::vector<bool> artificial;
    std::vector<bool> blocked;
    std::vector<int> ident_col; // column that started as the identity of row i
    bool repair_with_artificials = true;
    long pivots = 0;

    double& at(int i, int j) { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

    void pivot(int r, int s) {
        if (++pivots > kMaxPivots) throw IterationLimit("simplex pivot limit exceeded");
        std::vector<double>& row = a[static_cast<size_t>(r)];
        double inv = 1.0 / row[static_cast<size_t>(s)];
        for (double& v : row) v *= inv;
        row[static_cast<size_t>(s)] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = at(i, s);
            if (f == 0.0) continue;
            std::vector<double>& other = a[static_cast<size_t>(i)];
            for (int j = 0; j <= n_total; ++j) {
                other[static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
            }
            other[static_cast<size_t>(s)] = 0.0;
        }
        double f = red[static_cast<size_t>(s)];
        if (f != 0.0) {
            for (int j = 0; j <= n_total; ++j) {
                red[static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
            }
            red[static_cast<size_t>(s)] = 0.0;
        }
        basis[static_cast<size_t>(r)] = s;
    }

    void recompute_reduced_costs() {
        red.assign(static_cast<size_t>(n_total) + 1, 0.0);
        for (int j = 0; j < n_total; ++j) red[static_cast<size_t>(j)] = cost[static_cast<size_t>(j)];
        for (int i = 0; i < m; ++i) {
            double cb = cost[static_cast<size_t>(basis[static_cast<size_t>(i)])];
            if (cb == 0.0) continue;
            for (int j = 0; j <= n_total; ++j) red[static_cast<size_t>(j)] -= cb * at(i, j);
        }
    }

    /** Rebuilds the working tableau from the original rows under the current
     *  basis (Gaussian elimination, free row order, explicit unit columns),
     *  flushing the round-off that plain pivoting accumulates. Drift can let
     *  a column enter whose clean image is dependent on the rest of the
     *  basis; such a slot is repaired by swapping in a workable column
     *  (preferably a remaining row's original identity column). */
    void refactorize() {
        a = a0;
        std::vector<bool> done(static_cast<size_t>(m), false);
        std::vector<bool> in_basis(static_cast<size_t>(n_total), false);
        for (int i = 0; i < m; ++i) in_basis[static_cast<size_t>(basis[static_cast<size_t>(i)])] = true;

        for (int i = 0; i < m; ++i) {
            int col = basis[static_cast<size_t>(i)];
            auto best_row = [&](int c) {
                int r = -1;
                double best = kPivotTol;
                for (int k = 0; k < m; ++k) {
                    if (done[static_cast<size_t>(k)]) continue;
                    double v = std::abs(a[static_cast<size_t>(k)][static_cast<size_t>(c)]);
                    if (v > best) {
                        best = v;
                        r = k;
                    }
                }
                return r;
            };
            int r = best_row(col);
            if (r < 0) {
                auto usable = [&](int c) {
                    if (in_basis[static_cast<size_t>(c)]) return false;
                    if (!repair_with_artificials && artificial[static_cast<size_t>(c)]) return false;
                    return best_row(c) >= 0;
                };
                int pick_col = -1;
                for (int k = 0; k < m && pick_col < 0; ++k) {
                    if (done[static_cast<size_t>(k)]) continue;
                    int idc = ident_col[static_cast<size_t>(k)];
                    if (usable(idc)) pick_col = idc;
                }
                for (int c = 0; c < n_total && pick_col < 0; ++c) {
                    if (usable(c)) pick_col = c;
                }
                if (pick_col < 0) throw Error("simplex: basis beyond repair");
                in_basis[static_cast<size_t>(col)] = false;
                in_basis[static_cast<size_t>(pick_col)] = true;
                basis[static_cast<size_t>(i)] = pick_col;
                col = pick_col;
                r = best_row(col);
            }

            std::vector<double>& row = a[static_cast<size_t>(r)];
            double inv = 1.0 / row[static_cast<size_t>(col)];
            for (double& v : row) v *= inv;
            row[static_cast<size_t>(col)] = 1.0;
            for (int k = 0; k < m; ++k) {
                if (k == r) continue;
                double f = a[static_cast<size_t>(k)][static_cast<size_t>(col)];
                if (f == 0.0) continue;
                for (int j = 0; j <= n_total; ++j) {
                    a[static_cast<size_t>(k)][static_cast<size_t>(j)] -= f * row[static_cast<size_t>(j)];
                }
                a[static_cast<size_t>(k)][static_cast<size_t>(col)] = 0.0;
            }
            done[static_cast<size_t>(r)] = true;
            if (r != i) {
                std::swap(a[static_cast<size_t>(r)], a[static_cast<size_t>(i)]);
                done[static_cast<size_t>(r)] = done[static_cast<size_t>(i)];
                done[static_cast<size_t>(i)] = true;
            }
        }
        // Round tiny negative basic values up so the basis stays primal feasible.
        for (int i = 0; i < m; ++i) {
            if (at(i, n_total) < 0.0 && at(i, n_total) > -1e-7) at(i, n_total) = 0.0;
        }
        recompute_reduced_costs();
    }

    /** Bland's entering rule (lowest index with negative reduced cost) with a
     *  stabilized leaving rule: among rows within feasibility tolerance of
     *  the minimum ratio, take the largest pivot element, then the lowest
     *  basic index. Refactorizes periodically to keep drift bounded.
     *  Returns true at optimality, false when unbounded. */
    bool run() {
        int since_refactor = 0;
        for (;;) {
            int s = -1;
            for (int j = 0; j < n_total; ++j) {
                if (blocked[static_cast<size_t>(j)]) continue;
                if (red[static_cast<size_t>(j)] < -kPivotTol) {
                    s = j;
                    break;
                }
            }
            if (s < 0) return true;

            double theta = -1.0;
            for (int i = 0; i < m; ++i) {
                double aij = at(i, s);
                if (aij <= kPivotTol) continue;
                double ratio = std::max(at(i, n_total), 0.0) / aij;
                if (theta < 0.0 || ratio < theta) theta = ratio;
            }
            if (theta < 0.0) return false;

            int r = -1;
            double best_pivot = 0.0;
            for (int i = 0; i < m; ++i) {
                double aij = at(i, s);
                if (aij <= kPivotTol) continue;
                double ratio = std::max(at(i, n_total), 0.0) / aij;
                if (ratio > theta + 1e-9 / aij) continue; // outside tolerance band
                if (r < 0 || aij > best_pivot ||
                    (aij == best_pivot &&
                     basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(r)])) {
                    r = i;
                    best_pivot = aij;
                }
            }
            pivot(r, s);
            if (++since_refactor >= kRefactorEvery) {
                refactorize();
                since_refactor = 0;
            }
        }
    }

    /// Runs to optimality, refactorizing until clean reduced costs confirm it.
    /// Returns false when the phase is unbounded.
    bool run_to_clean_optimum() {
        for (int round = 0; round < 16; ++round) {
            if (!run()) return false;
            refactorize();
            bool clean = true;
            for (int j = 0; j < n_total && clean; ++j) {
                if (!blocked[static_cast<size_t>(j)] && red[static_cast<size_t>(j)] < -kPivotTol) {
                    clean = false;
                }
            }
            if (clean) return true;
        }
        throw IterationLimit("simplex failed to reach a clean optimum");
    }
};

} // namespace

LpSolution solve_simplex(const LinearProgram& lp) {
    const int n = lp.num_vars();
    const int m = static_cast<int>(lp.rows.size());

    Tableau t;
    t.m = m;

    // Count slack and artificial columns after normalizing rhs >= 0.
    std::vector<char> rel(static_cast<size_t>(m));
    std::vector<double> sign(static_cast<size_t>(m), 1.0);
    int n_slack = 0, n_art = 0;
    for (int i = 0; i < m; ++i) {
        const LinearProgram::Row& row = lp.rows[static_cast<size_t>(i)];
        char r = row.rel;
        if (row.rhs < 0.0) {
            sign[static_cast<size_t>(i)] = -1.0;
            r = r == 'L' ? 'G' : (r == 'G' ? 'L' : 'E');
        }
        rel[static_cast<size_t>(i)] = r;
        if (r == 'L' || r == 'G') ++n_slack;
        if (r == 'G' || r == 'E') ++n_art;
    }

    t.n_total = n + n_slack + n_art;
    t.a0.assign(static_cast<size_t>(m),
                std::vector<double>(static_cast<size_t>(t.n_total) + 1, 0.0));
    t.basis.assign(static_cast<size_t>(m), -1);
    t.artificial.assign(static_cast<size_t>(t.n_total), false);
    t.blocked.assign(static_cast<size_t>(t.n_total), false);
    t.ident_col.assign(static_cast<size_t>(m), -1);

    int slack_at = n, art_at = n + n_slack;
    for (int i = 0; i < m; ++i) {
        const LinearProgram::Row& row = lp.rows[static_cast<size_t>(i)];
        std::vector<double>& dst = t.a0[static_cast<size_t>(i)];
        for (int j = 0; j < n && j < static_cast<int>(row.coeffs.size()); ++j) {
            dst[static_cast<size_t>(j)] = sign[static_cast<size_t>(i)] * row.coeffs[static_cast<size_t>(j)];
        }
        dst[static_cast<size_t>(t.n_total)] = sign[static_cast<size_t>(i)] * row.rhs;
        char r = rel[static_cast<size_t>(i)];
        if (r == 'L') {
            dst[static_cast<size_t>(slack_at)] = 1.0;
            t.basis[static_cast<size_t>(i)] = slack_at;
            t.ident_col[static_cast<size_t>(i)] = slack_at;
            ++slack_at;
        } else if (r == 'G') {
            dst[static_cast<size_t>(slack_at)] = -1.0;
            ++slack_at;
        }
        if (r == 'G' || r == 'E') {
            dst[static_cast<size_t>(art_at)] = 1.0;
            t.artificial[static_cast<size_t>(art_at)] = true;
            t.basis[static_cast<size_t>(i)] = art_at;
            t.ident_col[static_cast<size_t>(i)] = art_at;
            ++art_at;
        }
    }
    t.a = t.a0;

    LpSolution sol;

    // Phase 1: minimize the artificial mass.
    t.cost.assign(static_cast<size_t>(t.n_total), 0.0);
    for (int j = 0; j < t.n_total; ++j) {
        if (t.artificial[static_cast<size_t>(j)]) t.cost[static_cast<size_t>(j)] = 1.0;
    }
    t.recompute_reduced_costs();
    t.run_to_clean_optimum(); // bounded below by zero, cannot be unbounded
    double infeas = -t.red[static_cast<size_t>(t.n_total)];
    if (infeas > kPhase1Tol) {
        sol.status = LpStatus::Infeasible;
        // Row multipliers out of the final tableau: y_i = cB . B^{-1} e_i,
        // read from the column that started as row i's identity.
        sol.row_duals.assign(static_cast<size_t>(m), 0.0);
        for (int i = 0; i < m; ++i) {
            double y = 0.0;
            for (int k = 0; k < m; ++k) {
                if (t.cost[static_cast<size_t>(t.basis[static_cast<size_t>(k)])] != 0.0) {
                    y += t.at(k, t.ident_col[static_cast<size_t>(i)]);
                }
            }
            sol.row_duals[static_cast<size_t>(i)] = sign[static_cast<size_t>(i)] * y;
        }
        return sol;
    }

    // Release basic artificials where a structural pivot exists; rows that
    // cannot release one are redundant, their artificial stays pinned at zero.
    for (int i = 0; i < m; ++i) {
        if (!t.artificial[static_cast<size_t>(t.basis[static_cast<size_t>(i)])]) continue;
        for (int j = 0; j < t.n_total; ++j) {
            if (t.artificial[static_cast<size_t>(j)]) continue;
            if (std::abs(t.at(i, j)) > kPivotTol) {
                t.pivot(i, j);
                break;
            }
        }
    }

    // Phase 2 on the real objective. Artificials stay blocked; any left in
    // the basis sit at zero (their rows carry no feasible mass to release).
    t.repair_with_artificials = false;
    for (int j = 0; j < t.n_total; ++j) {
        if (t.artificial[static_cast<size_t>(j)]) t.blocked[static_cast<size_t>(j)] = true;
        t.cost[static_cast<size_t>(j)] =
            j < n ? (lp.maximize ? -lp.objective[static_cast<size_t>(j)]
                                 : lp.objective[static_cast<size_t>(j)])
                  : 0.0;
    }
    t.recompute_reduced_costs();
    if (!t.run_to_clean_optimum()) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) {
        int b = t.basis[static_cast<size_t>(i)];
        if (b < n) sol.x[static_cast<size_t>(b)] = std::max(0.0, t.at(i, t.n_total));
    }
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += lp.objective[static_cast<size_t>(j)] * sol.x[static_cast<size_t>(j)];
    sol.value = v;
    return sol;
}

} // namespace credal
