#include "credal/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "credal/saturation.hpp"

namespace credal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// num/den for upper-bound terms: a zero numerator certifies zero mass, a
// zero denominator under positive mass makes the term vacuous.
double ratio_up(double num, double den) {
    if (num <= 0.0) return 0.0;
    if (den <= 0.0) return kInf;
    return num / den;
}

// 1 - (1 - x)/y for lower-bound brackets. x = 1 gives 1 regardless of y;
// y = 0 otherwise drives the bracket to -inf (clamped by the caller's max).
double bracket_lo(double x, double y) {
    if (x >= 1.0) return 1.0;
    if (y <= 0.0) return -kInf;
    return 1.0 - (1.0 - x) / y;
}

} // namespace

ArcWeightGraph ArcWeightGraph::build(const Network& net, int skip_a, int skip_b) {
    ArcWeightGraph g;
    g.n = net.atom_count();
    g.w.assign(static_cast<size_t>(g.n) * g.n, -kInf);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            if (i == j) continue;
            if ((i == skip_a && j == skip_b) || (i == skip_b && j == skip_a)) continue;
            double lo = net.at(i, j).lo();
            double hi = net.at(j, i).hi();
            if (lo > 0.0 && hi > 0.0) {
                g.w[static_cast<size_t>(i) * g.n + j] = std::log(lo) - std::log(hi);
            }
        }
    }
    return g;
}

PathMatrix longest_paths(const ArcWeightGraph& g) {
    PathMatrix pm;
    pm.n = g.n;
    pm.dist = g.w;
    const int n = g.n;
    pm.succ.assign(static_cast<size_t>(n) * n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (g.weight(i, j) > -kInf) pm.succ[static_cast<size_t>(i) * n + j] = j;
        }
    }
    auto d = [&](int i, int j) -> double& { return pm.dist[static_cast<size_t>(i) * n + j]; };
    // Improvement threshold: circuits of exactly zero weight round to 1e-16
    // scale jitter, which must not spawn repeated-traversal walks.
    constexpr double kGain = 1e-12;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (i == k || d(i, k) == -kInf) continue;
            for (int j = 0; j < n; ++j) {
                if (j == k || d(k, j) == -kInf) continue;
                double via = d(i, k) + d(k, j);
                if (via > d(i, j) + kGain) {
                    d(i, j) = via;
                    pm.succ[static_cast<size_t>(i) * n + j] =
                        pm.succ[static_cast<size_t>(i) * n + k];
                }
            }
        }
    }
    return pm;
}

std::vector<int> PathMatrix::path(int i, int j) const {
    std::vector<int> nodes{i};
    int u = i;
    // A hop count beyond n means the successor chain loops (possible only
    // around a tolerated near-zero circuit); return the prefix in that case.
    for (int hops = 0; hops <= n; ++hops) {
        int next = succ[static_cast<size_t>(u) * n + j];
        if (next < 0) break;
        nodes.push_back(next);
        u = next;
        if (u == j) break;
    }
    return nodes;
}

std::optional<CircuitViolation> cycle_check(const Network& net) {
    PathMatrix pm = longest_paths(ArcWeightGraph::build(net));
    int worst = -1;
    double excess = kCircuitTol;
    for (int i = 0; i < pm.n; ++i) {
        if (pm.at(i, i) > excess) {
            excess = pm.at(i, i);
            worst = i;
        }
    }
    if (worst < 0) return std::nullopt;
    return CircuitViolation{pm.path(worst, worst), pm.at(worst, worst)};
}

Interval qs_bounds(const Interval& ba, const Interval& ab, const Interval& cb,
                   const Interval& bc) {
    // Lower bound: P(C|A) >= P_lo(B|A) * max(0, 1 - (1 - P_lo(C|B)) / P_lo(A|B)).
    double lower = ba.lo() * std::max(0.0, bracket_lo(cb.lo(), ab.lo()));

    // Second upper term: 1 - P_lo(B|A) + P_lo(B|A) * P_hi(C|B) / P_lo(A|B).
    // A zero P_hi(C|B) empties B-and-C, so the quotient contributes nothing.
    double term2;
    if (ba.lo() <= 0.0) {
        term2 = 1.0;
    } else if (cb.hi() <= 0.0) {
        term2 = 1.0 - ba.lo();
    } else if (ab.lo() <= 0.0) {
        term2 = kInf;
    } else {
        term2 = 1.0 - ba.lo() + ba.lo() * cb.hi() / ab.lo();
    }

    // Third upper term. K bounds the mass ratio (B-and-C)/A via
    // P(BC) <= P_hi(C|B) P(B) and P(B) <= P(AB)/P_lo(A|B) <= P_hi(B|A)/P_lo(A|B);
    // with P_lo(B|C) the mass of C is at most P(BC)/P_lo(B|C), of which the
    // part beyond B-and-C covers A only at rate (1 - P_lo(B|C)).
    double K;
    if (cb.hi() <= 0.0) {
        K = 0.0;
    } else if (ba.hi() <= 0.0) {
        K = ab.lo() > 0.0 ? 0.0 : kInf;
    } else if (ab.lo() <= 0.0) {
        K = kInf;
    } else {
        K = ba.hi() * cb.hi() / ab.lo();
    }
    double term3;
    if (bc.lo() <= 0.0) {
        term3 = kInf;
    } else if (K == kInf) {
        term3 = bc.lo() >= 1.0 ? ba.hi() : kInf;
    } else {
        double head = std::min(ba.hi(), K);
        term3 = (head * bc.lo() + K * (1.0 - bc.lo())) / bc.lo();
    }

    // Companion ratio bound, independent of P(B|A): splitting C at B, the
    // C-and-B part is at most P_hi(C|B) P(B) while P_lo(B|C) caps how much
    // of C (hence of C-and-A) can lie outside B.
    double term3b = kInf;
    if (ab.lo() > cb.hi() && bc.lo() > 0.0) {
        term3b = cb.hi() / (cb.hi() + bc.lo() * (ab.lo() - cb.hi()));
    }

    double upper = std::min({1.0, term2, term3, term3b});
    return Interval::checked(lower, upper);
}

bool qs_sweep(Network& net, double eps, int iteration) {
    const int n = net.atom_count();
    bool any = false;
    bool moved = true;
    int guard = 0;
    while (moved) {
        moved = false;
        if (++guard > 100000) throw IterationLimit("qs_sweep failed to stabilize");
        for (int c = 0; c < n; ++c) {
            for (int b = 0; b < n; ++b) {
                if (b == c) continue;
                for (int a = 0; a < n; ++a) {
                    if (a == c || a == b) continue;
                    Interval cand =
                        qs_bounds(net.at(b, a), net.at(a, b), net.at(c, b), net.at(b, c));
                    if (net.tighten(c, a, cand, Rule::QS, {c, b, a}, iteration, eps)) {
                        moved = true;
                        any = true;
                    }
                }
            }
        }
    }
    return any;
}

bool bg_tighten(Network& net, double eps, int iteration) {
    const int n = net.atom_count();
    bool any = false;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PathMatrix pm = longest_paths(ArcWeightGraph::build(net, i, j));
            double d_ij = pm.at(i, j);
            double d_ji = pm.at(j, i);
            if (d_ij == -kInf && d_ji == -kInf) continue;

            const Interval ij = net.at(i, j);
            const Interval ji = net.at(j, i);

            // Entry (i, j): path i->j scales the opposite lower bound up,
            // path j->i scales the opposite upper bound down.
            if (d_ij > -kInf) {
                double lo = ji.lo() * std::exp(d_ij);
                if (lo > 0.0) {
                    any |= net.tighten(i, j, Interval::checked(lo, 1.0), Rule::BG, pm.path(i, j),
                                       iteration, eps);
                }
                double hi = ij.hi() * std::exp(-d_ij);
                if (hi < 1.0) {
                    any |= net.tighten(j, i, Interval::checked(0.0, hi), Rule::BG, pm.path(i, j),
                                       iteration, eps);
                }
            }
            if (d_ji > -kInf) {
                double lo = ij.lo() * std::exp(d_ji);
                if (lo > 0.0) {
                    any |= net.tighten(j, i, Interval::checked(lo, 1.0), Rule::BG, pm.path(j, i),
                                       iteration, eps);
                }
                double hi = ji.hi() * std::exp(-d_ji);
                if (hi < 1.0) {
                    any |= net.tighten(i, j, Interval::checked(0.0, hi), Rule::BG, pm.path(j, i),
                                       iteration, eps);
                }
            }
        }
    }
    return any;
}

Interval disj_membership(const Interval& p, const Interval& q) {
    if (p.hi() <= 0.0 && q.hi() <= 0.0) {
        throw UndefinedMembership("P(A | A or B) undefined: no mass evidence on either side");
    }
    auto f = [](double pp, double qq) { return pp / (pp + qq - pp * qq); };
    double lo = (p.lo() + q.hi() <= 0.0) ? 0.0 : f(p.lo(), q.hi());
    double hi = (q.lo() <= 0.0) ? 1.0 : f(p.hi(), q.lo());
    return Interval::checked(lo, hi);
}

namespace {

// Evaluates f at every corner of the argument box; returns {min, max} over
// the corners. Componentwise-monotone expressions make this exact.
template <typename F>
std::pair<double, double> corner_range(const std::vector<Interval>& args, F f) {
    const int k = static_cast<int>(args.size());
    double lo = kInf, hi = -kInf;
    std::vector<double> point(args.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
        for (int i = 0; i < k; ++i) {
            point[static_cast<size_t>(i)] = (mask >> i) & 1 ? args[static_cast<size_t>(i)].hi()
                                                            : args[static_cast<size_t>(i)].lo();
        }
        double v = f(point);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

} // namespace

bool indep_tighten(Network& net, const IndepDecl& decl, double eps, int iteration) {
    const int a = decl.a, b = decl.b, c = decl.c;
    const Interval ba = net.at(b, a), ab = net.at(a, b);
    const Interval cb = net.at(c, b), bc = net.at(b, c);
    std::vector<int> ops{a, b, c};
    bool any = false;

    switch (decl.kind) {
    case IndepKind::I: {
        // B and C independent given A: the syllogism collapses to the
        // direct projection through B.
        double lo = std::max(0.0, bracket_lo(cb.lo(), ab.lo()));
        double hi;
        if (cb.hi() <= 0.0) {
            hi = ab.lo() > 0.0 ? 0.0 : 1.0;
        } else {
            hi = std::min(1.0, ratio_up(cb.hi(), ab.lo()));
        }
        any |= net.tighten(c, a, Interval::checked(lo, hi), Rule::INDEP, ops, iteration, eps);
        break;
    }
    case IndepKind::II: {
        // A and C independent given B: P(C|B) transfers to the A context
        // at rate P(B|A).
        double lo = cb.lo() * ba.lo();
        double hi = std::min(1.0, 1.0 - ba.lo() * (1.0 - cb.hi()));
        any |= net.tighten(c, a, Interval::checked(lo, hi), Rule::INDEP, ops, iteration, eps);

        double lo_m = ab.lo() * bc.lo();
        double hi_m = std::min(1.0, 1.0 - bc.lo() * (1.0 - ab.hi()));
        any |= net.tighten(a, c, Interval::checked(lo_m, hi_m), Rule::INDEP, ops, iteration, eps);

        // Ratio form on top of the transfer bound; only meaningful when
        // every quantity in the cycle identity stays positive.
        auto g13 = [](const std::vector<double>& v) {
            double vba = v[0], vcb = v[1], vab = v[2], vbc = v[3];
            if (vba <= 0.0 || vcb <= 0.0 || vab <= 0.0 || vbc <= 0.0) return kInf;
            return (vba * vcb) / (vab * vbc) * (1.0 - vbc + vab * vbc);
        };
        double hi13 = corner_range({ba, cb, ab, bc}, g13).second;
        if (hi13 < 1.0) {
            any |= net.tighten(c, a, Interval::checked(0.0, hi13), Rule::INDEP, ops, iteration,
                               eps);
        }
        break;
    }
    case IndepKind::III: {
        // A and B independent given C: mirror of kind i bounding P(A|C),
        // then transported to P(C|A) through the cycle identity.
        double lo = std::max(0.0, bracket_lo(ab.lo(), cb.lo()));
        double hi;
        if (ab.hi() <= 0.0) {
            hi = cb.lo() > 0.0 ? 0.0 : 1.0;
        } else {
            hi = std::min(1.0, ratio_up(ab.hi(), cb.lo()));
        }
        any |= net.tighten(a, c, Interval::checked(lo, hi), Rule::INDEP, ops, iteration, eps);

        auto h16 = [](const std::vector<double>& v) {
            double vba = v[0], vcb = v[1], vab = v[2], vbc = v[3];
            if (vba <= 0.0 || vbc <= 0.0 || vab <= 0.0) return -kInf;
            return vba / vbc * (1.0 - (1.0 - vcb) / vab);
        };
        double lo16 = std::max(0.0, corner_range({ba, cb, ab, bc}, h16).first);
        double hi16 = (ba.hi() > 0.0 && bc.lo() > 0.0) ? ba.hi() / bc.lo() : kInf;
        if (lo16 > 0.0 || hi16 < 1.0) {
            any |= net.tighten(c, a, Interval::checked(lo16, std::min(1.0, hi16)), Rule::INDEP,
                               ops, iteration, eps);
        }
        break;
    }
    }
    return any;
}

bool indep_sweep(Network& net, double eps, int iteration) {
    bool any = false;
    for (const IndepDecl& d : net.indeps()) any |= indep_tighten(net, d, eps, iteration);
    return any;
}

Interval conj_closed_bounds(const Network& net, int a, int b, int c, ConjDirection dir) {
    const Interval ca = net.at(c, a), ba = net.at(b, a);
    const Interval cb = net.at(c, b), ab = net.at(a, b);
    const Interval bc = net.at(b, c), ac = net.at(a, c);

    if (dir == ConjDirection::CGivenAB) {
        // Syllogism projections cancelling A and cancelling B.
        double lower = std::max({0.0, bracket_lo(ca.lo(), ba.lo()), bracket_lo(cb.lo(), ab.lo())});
        // Additivity of P(ABC) over the A-and-C / B-and-C split.
        if (ba.hi() > 0.0 && ab.lo() > 0.0 && bc.lo() > 0.0) {
            lower = std::max(lower, ca.lo() / ba.hi() +
                                        (cb.hi() / ab.lo()) * (1.0 - 1.0 / bc.lo()));
        }
        if (ab.hi() > 0.0 && ba.lo() > 0.0 && ac.lo() > 0.0) {
            lower = std::max(lower, cb.lo() / ab.hi() +
                                        (ca.hi() / ba.lo()) * (1.0 - 1.0 / ac.lo()));
        }
        double upper = std::min({1.0, ratio_up(cb.hi(), ab.lo()), ratio_up(ca.hi(), ba.lo())});
        return Interval::checked(std::max(0.0, lower), upper);
    }

    // ABGivenC
    double lower = std::max(0.0, ac.lo() + bc.lo() - 1.0);
    double br1 = bracket_lo(ba.lo(), ca.lo());
    if (br1 > 0.0) lower = std::max(lower, ac.lo() * br1);
    double br2 = bracket_lo(ab.lo(), cb.lo());
    if (br2 > 0.0) lower = std::max(lower, bc.lo() * br2);
    double upper = std::min({1.0, ac.hi(), bc.hi(), ratio_up(ac.hi() * ba.hi(), ca.lo()),
                             ratio_up(bc.hi() * ab.hi(), cb.lo())});
    return Interval::checked(lower, upper);
}

Interval conj_query_bounds(const Network& net, int a, int b, int c, ConjDirection dir) {
    Network ext = net;
    int node = ext.add_conjunction_node(a, b);
    SaturationReport rep = saturate(ext);
    if (rep.status == SatStatus::Inconsistent) {
        throw Inconsistent("conjunction extension: " + rep.witness);
    }
    Interval aux = dir == ConjDirection::CGivenAB ? ext.at(c, node) : ext.at(node, c);
    return intersect(aux, conj_closed_bounds(ext, a, b, c, dir));
}

Interval disj_closed_bounds(const Network& net, int a, int b, int c, DisjDirection dir) {
    const Interval ac = net.at(a, c), bc = net.at(b, c);
    const Interval ca = net.at(c, a), cb = net.at(c, b);
    const Interval ab = net.at(a, b), ba = net.at(b, a);

    if (dir == DisjDirection::AvBGivenC) {
        double lower = std::max(ac.lo(), bc.lo());
        double upper = std::min(1.0, ac.hi() + bc.hi());
        return Interval::checked(lower, upper);
    }

    // CGivenAvB: weight the per-parent conditionals by the membership bounds.
    Interval memb_a = Interval::vacuous();
    Interval memb_b = Interval::vacuous();
    if (ab.hi() > 0.0 || ba.hi() > 0.0) {
        memb_a = disj_membership(ab, ba);
        memb_b = disj_membership(ba, ab);
    }
    double lower = std::max(ca.lo() * memb_a.lo(), cb.lo() * memb_b.lo());
    double upper = std::min(1.0, ca.hi() * memb_a.hi() + cb.hi() * memb_b.hi());
    return Interval::checked(lower, upper);
}

} // namespace credal
