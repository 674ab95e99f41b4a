#include "credal/lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace credal {

namespace {

// Resolves atoms against world bitmasks. Base atoms get consecutive bit
// positions in id order; auxiliary atoms are mask unions/intersections.
struct WorldView {
    const Network& net;
    std::vector<int> bits;

    explicit WorldView(const Network& n) : net(n), bits(static_cast<size_t>(n.atom_count()), -1) {
        int next = 0;
        for (const Atom& a : n.atoms()) {
            if (a.is_base()) bits[static_cast<size_t>(a.id)] = next++;
        }
    }

    bool satisfies(int atom_id, std::uint32_t w) const {
        const Atom& a = net.atom(atom_id);
        switch (a.kind) {
        case AtomKind::Base: return (w >> bits[static_cast<size_t>(atom_id)]) & 1u;
        case AtomKind::Conjunction: return satisfies(a.left, w) && satisfies(a.right, w);
        case AtomKind::Disjunction: return satisfies(a.left, w) || satisfies(a.right, w);
        }
        return false;
    }

    bool satisfies(const QuerySide& s, std::uint32_t w) const {
        switch (s.kind) {
        case QuerySide::Atom: return satisfies(s.a, w);
        case QuerySide::And: return satisfies(s.a, w) && satisfies(s.b, w);
        case QuerySide::Or: return satisfies(s.a, w) || satisfies(s.b, w);
        }
        return false;
    }
};

void mention_atom(const Network& net, int id, std::set<int>& out) {
    const Atom& a = net.atom(id);
    if (a.is_base()) {
        out.insert(id);
    } else {
        mention_atom(net, a.left, out);
        mention_atom(net, a.right, out);
    }
}

void mention_side(const Network& net, const QuerySide& s, std::set<int>& out) {
    mention_atom(net, s.a, out);
    if (s.kind != QuerySide::Atom) mention_atom(net, s.b, out);
}

struct ProgramSkeleton {
    int n_base = 0;
    int n_worlds = 0;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
};

// Constraint rows for the KB plus mass floors for the mentioned base atoms
// (and `extra_mentions`, normally the query's atoms).
ProgramSkeleton world_constraints(const Network& net, const std::set<int>& extra_mentions,
                                  const OracleOptions& opt) {
    ProgramSkeleton sk;
    sk.n_base = net.base_atom_count();
    if (sk.n_base > opt.max_base_atoms && !opt.force) {
        throw TooManyAtoms("oracle limited to " + std::to_string(opt.max_base_atoms) +
                           " base atoms (" + std::to_string(sk.n_base) + " present)");
    }
    if (sk.n_base > 25) throw TooManyAtoms("world table would not fit in memory");
    sk.n_worlds = 1 << sk.n_base;

    WorldView view(net);
    std::set<int> mentioned = extra_mentions;
    const int n = net.atom_count();
    for (int t = 0; t < n; ++t) {
        for (int g = 0; g < n; ++g) {
            if (t == g) continue;
            const Interval& v = net.at(t, g);
            if (v.is_vacuous()) continue;
            mention_atom(net, t, mentioned);
            mention_atom(net, g, mentioned);
            std::vector<double> upper(static_cast<size_t>(sk.n_worlds), 0.0);
            std::vector<double> lower(static_cast<size_t>(sk.n_worlds), 0.0);
            for (std::uint32_t w = 0; w < static_cast<std::uint32_t>(sk.n_worlds); ++w) {
                if (!view.satisfies(g, w)) continue;
                bool in_tg = view.satisfies(t, w);
                upper[w] = (in_tg ? 1.0 : 0.0) - v.hi();
                lower[w] = v.lo() - (in_tg ? 1.0 : 0.0);
            }
            std::string arc = net.arc_label(t, g);
            if (v.hi() < 1.0) {
                sk.rows.push_back(std::move(upper));
                sk.labels.push_back(arc + " <= " + format_prob(v.hi()));
            }
            if (v.lo() > 0.0) {
                sk.rows.push_back(std::move(lower));
                sk.labels.push_back(arc + " >= " + format_prob(v.lo()));
            }
        }
    }

    for (int id : mentioned) {
        std::vector<double> row(static_cast<size_t>(sk.n_worlds), opt.eps_mass);
        for (std::uint32_t w = 0; w < static_cast<std::uint32_t>(sk.n_worlds); ++w) {
            if (view.satisfies(id, w)) row[w] -= 1.0;
        }
        sk.rows.push_back(std::move(row));
        sk.labels.push_back("mass(" + net.atom(id).name + ") >= " + std::to_string(opt.eps_mass));
    }
    return sk;
}

} // namespace

bool world_satisfies(const Network& net, int atom_id, std::uint32_t w) {
    return WorldView(net).satisfies(atom_id, w);
}

FractionalProgram build_world_lp(const Network& net, const QueryExpr& q, bool maximize,
                                 const OracleOptions& opt) {
    std::set<int> mentions;
    mention_side(net, q.target, mentions);
    mention_side(net, q.given, mentions);
    ProgramSkeleton sk = world_constraints(net, mentions, opt);

    FractionalProgram fp;
    fp.n_base = sk.n_base;
    fp.n_worlds = sk.n_worlds;
    fp.maximize = maximize;
    fp.rows = std::move(sk.rows);
    fp.row_labels = std::move(sk.labels);
    fp.numerator.assign(static_cast<size_t>(fp.n_worlds), 0.0);
    fp.denominator.assign(static_cast<size_t>(fp.n_worlds), 0.0);
    WorldView view(net);
    for (std::uint32_t w = 0; w < static_cast<std::uint32_t>(fp.n_worlds); ++w) {
        if (!view.satisfies(q.given, w)) continue;
        fp.denominator[w] = 1.0;
        if (view.satisfies(q.target, w)) fp.numerator[w] = 1.0;
    }
    return fp;
}

LinearProgram charnes_cooper(const FractionalProgram& fp) {
    bool nonzero = std::any_of(fp.denominator.begin(), fp.denominator.end(),
                               [](double d) { return d != 0.0; });
    if (!nonzero) {
        throw DegenerateDenominator("query denominator selects no world");
    }
    const int n = fp.n_worlds;
    LinearProgram lp;
    lp.maximize = fp.maximize;
    lp.objective = fp.numerator;
    lp.objective.push_back(0.0); // scale variable t
    for (const std::vector<double>& r : fp.rows) {
        std::vector<double> row = r;
        row.push_back(0.0);
        lp.add_row(std::move(row), 'L', 0.0);
    }
    std::vector<double> denom = fp.denominator;
    denom.push_back(0.0);
    lp.add_row(std::move(denom), 'E', 1.0);
    // Simplex-sum constraint of the original program, scaled: sum y = t.
    std::vector<double> sum_row(static_cast<size_t>(n), 1.0);
    sum_row.push_back(-1.0);
    lp.add_row(std::move(sum_row), 'E', 0.0);
    return lp;
}

namespace {

// Maps a (P') optimum back to world probabilities and verifies it against
// the fractional program. Guards against pivot drift.
void verify_solution(const FractionalProgram& fp, const LpSolution& sol) {
    double total = 0.0;
    for (int w = 0; w < fp.n_worlds; ++w) total += sol.x[static_cast<size_t>(w)];
    if (!(total > 0.0)) throw Error("oracle verification: zero total mass");
    double num = 0.0, den = 0.0;
    for (int w = 0; w < fp.n_worlds; ++w) {
        double xw = sol.x[static_cast<size_t>(w)] / total;
        if (xw < -1e-9) throw Error("oracle verification: negative world probability");
        num += fp.numerator[static_cast<size_t>(w)] * xw;
        den += fp.denominator[static_cast<size_t>(w)] * xw;
    }
    if (!(den > 0.0)) throw Error("oracle verification: zero denominator at optimum");
    if (std::abs(num / den - sol.value) > 1e-9) {
        throw Error("oracle verification: fractional objective mismatch");
    }
    for (const std::vector<double>& row : fp.rows) {
        double lhs = 0.0;
        for (int w = 0; w < fp.n_worlds; ++w) {
            lhs += row[static_cast<size_t>(w)] * sol.x[static_cast<size_t>(w)] / total;
        }
        if (lhs > 1e-8) throw Error("oracle verification: constraint residual too large");
    }
}

} // namespace

Interval exact_bounds(const Network& net, const QueryExpr& q, const OracleOptions& opt) {
    FractionalProgram fp_min = build_world_lp(net, q, false, opt);
    LpSolution lo_sol = solve_simplex(charnes_cooper(fp_min));
    if (lo_sol.status != LpStatus::Optimal) {
        if (check_consistency(net, opt).consistent) {
            throw DegenerateDenominator("conditioning event of " + query_label(net, q) +
                                        " has no attainable mass");
        }
        throw Inconsistent("knowledge base admits no probability distribution");
    }
    verify_solution(fp_min, lo_sol);

    FractionalProgram fp_max = build_world_lp(net, q, true, opt);
    LpSolution hi_sol = solve_simplex(charnes_cooper(fp_max));
    if (hi_sol.status != LpStatus::Optimal) {
        throw Error("oracle: upper program failed after feasible lower program");
    }
    verify_solution(fp_max, hi_sol);

    return Interval::checked(lo_sol.value, hi_sol.value);
}

Verdict check_consistency(const Network& net, const OracleOptions& opt) {
    ProgramSkeleton sk = world_constraints(net, {}, opt);
    LinearProgram lp;
    lp.maximize = false;
    lp.objective.assign(static_cast<size_t>(sk.n_worlds), 0.0);
    std::vector<std::string> labels = sk.labels;
    for (std::vector<double>& r : sk.rows) lp.add_row(std::move(r), 'L', 0.0);
    lp.add_row(std::vector<double>(static_cast<size_t>(sk.n_worlds), 1.0), 'E', 1.0);

    LpSolution sol = solve_simplex(lp);
    Verdict v;
    if (sol.status == LpStatus::Optimal) {
        v.consistent = true;
        return v;
    }
    v.consistent = false;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i < sol.row_duals.size() && std::abs(sol.row_duals[i]) > 1e-7) {
            v.certificate.push_back(labels[i]);
        }
    }
    if (v.certificate.empty()) v.certificate.push_back("infeasible constraint system");
    return v;
}

} // namespace credal
