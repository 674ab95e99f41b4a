#ifndef CREDAL_RULES_HPP
#define CREDAL_RULES_HPP

#include <optional>
#include <vector>

#include "credal/network.hpp"

namespace credal {

/// Minimum endpoint movement that counts as a change.
constexpr double kTightenTol = 1e-9;
/// Tolerance on circuit log-weight positivity.
constexpr double kCircuitTol = 1e-7;

/** Log-weight digraph over the network's atoms. The arc (i, j) carries
 *  ln P_lo(A_i|A_j) - ln P_hi(A_j|A_i), the log of the lower mass-ratio
 *  estimate d(i,j) = P_lo(A_i|A_j) / P_hi(A_j|A_i); -inf when either
 *  endpoint vanishes. The upper ratio is 1/d(j,i) and needs no storage. */
struct ArcWeightGraph {
    int n = 0;
    std::vector<double> w; // row-major, -inf = no arc

    /// Builds from the current bounds table. The pair (skip_a, skip_b), when
    /// given, has both of its direct arcs suppressed.
    static ArcWeightGraph build(const Network& net, int skip_a = -1, int skip_b = -1);

    double weight(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
};

/** All-pairs longest paths of an ArcWeightGraph (Floyd-Warshall over the
 *  (max, +) algebra). Only valid as elementary-path lengths when the graph
 *  has no positive circuit. */
struct PathMatrix {
    int n = 0;
    std::vector<double> dist; // -inf = unreachable
    std::vector<int> succ;    // next hop toward j on a best path, -1 = none

    double at(int i, int j) const { return dist[static_cast<size_t>(i) * n + j]; }
    /// Node sequence from i to j (inclusive); i == j yields a circuit.
    std::vector<int> path(int i, int j) const;
};

PathMatrix longest_paths(const ArcWeightGraph& g);

/** Quantified syllogism: bounds on P(C|A) from the intervals for P(B|A),
 *  P(A|B), P(C|B) and P(B|C). Total on valid intervals; vacuous inputs give
 *  vacuous outputs. */
Interval qs_bounds(const Interval& ba, const Interval& ab, const Interval& cb,
                   const Interval& bc);

/** Applies qs_bounds over every ordered distinct triple and intersects the
 *  result into the (C, A) entry, sweeping until no entry moves by more than
 *  eps. Returns whether anything changed. Throws Inconsistent. */
bool qs_sweep(Network& net, double eps = kTightenTol, int iteration = 0);

/** One pass of the generalized Bayes rule: for each atom pair, longest
 *  paths with the direct arcs suppressed give a lower factor for one
 *  direction and an upper factor for the other. Requires cycle_check to
 *  have passed. Returns whether anything changed. */
bool bg_tighten(Network& net, double eps = kTightenTol, int iteration = 0);

struct CircuitViolation {
    std::vector<int> circuit; // closed node sequence, first == last
    double excess;            // positive log-weight of the circuit
};

/// Looks for a circuit of positive log-weight; its existence proves the
/// bounds inconsistent. Returns a witness, not an exception.
std::optional<CircuitViolation> cycle_check(const Network& net);

/** Membership bound P(A | A or B) = p / (p + q - p*q) evaluated soundly on
 *  intervals, where p bounds P(A|B) and q bounds P(B|A). The map is
 *  nondecreasing in p and nonincreasing in q. Throws UndefinedMembership
 *  when p and q are both certainly zero. */
Interval disj_membership(const Interval& p, const Interval& q);

/** Applies the declared independence assumption's closed-form bounds,
 *  intersecting into the (C, A) entry (and (A, C) where the mirrored form
 *  applies). Returns whether anything changed. */
bool indep_tighten(Network& net, const IndepDecl& decl, double eps = kTightenTol,
                   int iteration = 0);

/// Runs indep_tighten for every declaration in order.
bool indep_sweep(Network& net, double eps = kTightenTol, int iteration = 0);

enum class ConjDirection { CGivenAB, ABGivenC };

/** Closed-form conjunction bounds from the six arcs among {a, b, c},
 *  evaluated at sound interval corners:
 *    - CGivenAB: the two syllogism projections plus the additivity lower
 *      bounds through P(B|C) and P(A|C);
 *    - ABGivenC: the syllogism projections, the min of the direct masses,
 *      and the additivity lower bound P(A|C) + P(B|C) - 1. */
Interval conj_closed_bounds(const Network& net, int a, int b, int c, ConjDirection dir);

/** Query-level conjunction bounds: saturates a clone extended with the
 *  conjunction node and intersects the resulting entry with
 *  conj_closed_bounds. Throws Inconsistent when the extension reveals a
 *  contradiction. */
Interval conj_query_bounds(const Network& net, int a, int b, int c, ConjDirection dir);

enum class DisjDirection { CGivenAvB, AvBGivenC };

/// Closed-form disjunction analogues (additivity and membership-weighted
/// sums); same contract as conj_closed_bounds.
Interval disj_closed_bounds(const Network& net, int a, int b, int c, DisjDirection dir);

} // namespace credal

#endif
