#ifndef CREDAL_TESTS_SUPPORT_HPP
#define CREDAL_TESTS_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "credal/network.hpp"
#include "credal/simplex.hpp"

namespace testsup {

using credal::Interval;
using credal::Network;

/// P(A_t | A_g) of a world distribution, atom id == bit index.
inline double conditional(const std::vector<double>& x, int t, int g) {
    double num = 0.0, den = 0.0;
    for (size_t w = 0; w < x.size(); ++w) {
        if ((w >> g) & 1u) {
            den += x[w];
            if ((w >> t) & 1u) num += x[w];
        }
    }
    return num / den;
}

/// Random distribution over 2^n worlds with every atom's mass well above
/// the oracle's default floor (mixes in a uniform component).
inline std::vector<double> random_distribution(std::mt19937& rng, int n_atoms) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(size_t(1) << n_atoms);
    double s = 0.0;
    for (double& v : x) {
        v = e(rng);
        s += v;
    }
    double u = 1.0 / static_cast<double>(x.size());
    for (double& v : x) v = 0.9 * v / s + 0.1 * u;
    return x;
}

/// Interval around a witness value, clamped to [0,1].
inline Interval widen(std::mt19937& rng, double p, double max_slack) {
    std::uniform_real_distribution<double> U(0.0, max_slack);
    return Interval(std::max(0.0, p - U(rng)), std::min(1.0, p + U(rng)));
}

/// Network whose entries all contain the witness distribution's
/// conditionals, hence feasible by construction. Atoms are named a, b, c...
inline Network witness_network(std::mt19937& rng, const std::vector<double>& x, int n_atoms,
                               double max_slack = 0.15, double vacuous_prob = 0.3) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Network net;
    for (int i = 0; i < n_atoms; ++i) net.add_atom(std::string(1, char('a' + i)));
    for (int t = 0; t < n_atoms; ++t) {
        for (int g = 0; g < n_atoms; ++g) {
            if (t == g || U(rng) < vacuous_prob) continue;
            net.set(t, g, widen(rng, conditional(x, t, g), max_slack));
        }
    }
    return net;
}

/// Chain network a-b-c-...: only consecutive arc pairs constrained.
inline Network chain_network(std::mt19937& rng, const std::vector<double>& x, int n_atoms,
                             double max_slack = 0.2) {
    Network net;
    for (int i = 0; i < n_atoms; ++i) net.add_atom(std::string(1, char('a' + i)));
    for (int i = 0; i + 1 < n_atoms; ++i) {
        net.set(i, i + 1, widen(rng, conditional(x, i, i + 1), max_slack));
        net.set(i + 1, i, widen(rng, conditional(x, i + 1, i), max_slack));
    }
    return net;
}

/** Brute-force LP reference: enumerates candidate vertices as intersections
 *  of n active constraints drawn from the rows (as equalities) and the
 *  coordinate planes, keeps the feasible ones and returns the best
 *  objective. Exponential; for small test programs only. */
struct VertexOracle {
    bool feasible = false;
    double best = 0.0;
};

inline bool gauss_solve(std::vector<std::vector<double>> m, std::vector<double>& out) {
    int n = static_cast<int>(out.size());
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        double mag = 1e-10;
        for (int r = c; r < n; ++r) {
            if (std::abs(m[size_t(r)][size_t(c)]) > mag) {
                mag = std::abs(m[size_t(r)][size_t(c)]);
                piv = r;
            }
        }
        if (piv < 0) return false;
        std::swap(m[size_t(piv)], m[size_t(c)]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = m[size_t(r)][size_t(c)] / m[size_t(c)][size_t(c)];
            if (f == 0.0) continue;
            for (int j = c; j <= n; ++j) m[size_t(r)][size_t(j)] -= f * m[size_t(c)][size_t(j)];
        }
    }
    for (int c = 0; c < n; ++c) out[size_t(c)] = m[size_t(c)][size_t(n)] / m[size_t(c)][size_t(c)];
    return true;
}

inline VertexOracle vertex_enumerate(const credal::LinearProgram& lp) {
    const int n = lp.num_vars();
    // Candidate active constraints: every row as an equality plus x_j = 0.
    std::vector<std::pair<std::vector<double>, double>> cands;
    for (const auto& row : lp.rows) {
        std::vector<double> c = row.coeffs;
        c.resize(size_t(n), 0.0);
        cands.emplace_back(c, row.rhs);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> c(size_t(n), 0.0);
        c[size_t(j)] = 1.0;
        cands.emplace_back(c, 0.0);
    }

    VertexOracle result;
    std::vector<int> pick(size_t(n));
    const int total = static_cast<int>(cands.size());

    std::vector<int> stack;
    stack.reserve(size_t(n));
    // Iterative combination enumeration.
    std::vector<int> idx(size_t(n), 0);
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == n) {
            std::vector<std::vector<double>> m(size_t(n), std::vector<double>(size_t(n) + 1));
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) m[size_t(r)][size_t(c)] = cands[size_t(pick[size_t(r)])].first[size_t(c)];
                m[size_t(r)][size_t(n)] = cands[size_t(pick[size_t(r)])].second;
            }
            std::vector<double> x(size_t(n));
            if (!gauss_solve(std::move(m), x)) return;
            for (double v : x)
                if (v < -1e-7) return;
            for (const auto& row : lp.rows) {
                double lhs = 0.0;
                for (int j = 0; j < n && j < static_cast<int>(row.coeffs.size()); ++j) {
                    lhs += row.coeffs[size_t(j)] * x[size_t(j)];
                }
                if (row.rel == 'L' && lhs > row.rhs + 1e-7) return;
                if (row.rel == 'G' && lhs < row.rhs - 1e-7) return;
                if (row.rel == 'E' && std::abs(lhs - row.rhs) > 1e-7) return;
            }
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += lp.objective[size_t(j)] * x[size_t(j)];
            if (!result.feasible || (lp.maximize ? obj > result.best : obj < result.best)) {
                result.best = obj;
            }
            result.feasible = true;
            return;
        }
        for (int i = start; i < total; ++i) {
            pick[size_t(depth)] = i;
            rec(depth + 1, i + 1);
        }
    };
    rec(0, 0);
    return result;
}

} // namespace testsup

#endif
