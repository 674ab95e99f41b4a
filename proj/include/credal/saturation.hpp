#ifndef CREDAL_SATURATION_HPP
#define CREDAL_SATURATION_HPP

#include <chrono>
#include <string>
#include <string_view>

#include "credal/network.hpp"

namespace credal {

enum class SatStatus { Saturated, MaxIterations, Inconsistent };

struct SaturationReport {
    int iterations = 0;   // outer QS/BG/independence loops
    int changed_arcs = 0; // entries that moved by more than the tolerance
    std::chrono::duration<double> wall_time{0.0};
    DerivationTrace trace; // steps recorded during this run
    SatStatus status = SatStatus::Saturated;
    std::string witness; // inconsistency description when status says so
};

/** Runs the fixpoint loop: circuit check, then alternate a QS sweep to
 *  stability, one generalized-Bayes pass, and the independence tighteners,
 *  until no entry moves by more than tol or max_outer loops elapse. Never
 *  throws past the report; inconsistencies come back in `status`. */
SaturationReport saturate(Network& net, double tol = 1e-9, int max_outer = 100);

/// Saturation accepts at most this many atoms.
constexpr int kMaxSaturationAtoms = 256;

struct QuerySide {
    enum Kind { Atom, And, Or } kind = Atom;
    int a = -1;
    int b = -1; // second atom for And/Or
};

struct QueryExpr {
    QuerySide target;
    QuerySide given;
};

/** Parses "TARGET | GIVEN" where each side is NAME, NAME & NAME, or
 *  NAME + NAME. Whitespace insensitive. Throws SyntaxError / UnknownAtom. */
QueryExpr parse_query(const Network& net, std::string_view text);

struct QueryResult {
    Interval bounds;
    DerivationTrace steps; // the tightenings that produced the final interval
};

/** Answers a query against a saturated network. Atomic sides are table
 *  lookups; conjunction/disjunction sides synthesize the auxiliary node on
 *  a clone, re-saturate, and intersect with the closed-form bounds. The
 *  input network is never mutated. Throws Inconsistent when the extension
 *  reveals a contradiction. */
QueryResult query(const Network& net, const QueryExpr& q);

/// Human-readable rendering, e.g. "P(a&b|c)".
std::string query_label(const Network& net, const QueryExpr& q);

} // namespace credal

#endif
