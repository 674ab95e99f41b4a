#ifndef CREDAL_LP_ORACLE_HPP
#define CREDAL_LP_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "credal/network.hpp"
#include "credal/saturation.hpp"
#include "credal/simplex.hpp"

namespace credal {

struct OracleOptions {
    /// Minimum probability mass for every base atom mentioned in a
    /// constraint or query. Without a floor every conditional constraint is
    /// vacuously satisfiable by an empty conditioning class.
    double eps_mass = 1e-6;
    /// Hard cap on base atoms (2^n possible worlds).
    int max_base_atoms = 12;
    bool force = false;
};

/** The fractional program over possible worlds: optimize
 *  (numerator . x) / (denominator . x) subject to rows . x <= 0,
 *  sum x = 1, x >= 0. Worlds are truth-assignment bitmasks over the base
 *  atoms; auxiliary atoms translate to mask intersections/unions. */
struct FractionalProgram {
    int n_base = 0;
    int n_worlds = 0;
    bool maximize = true;
    std::vector<double> numerator;   // 1 on worlds satisfying target-and-given
    std::vector<double> denominator; // 1 on worlds satisfying given
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels; // aligned with rows, for certificates
};

/// True when world `w` (bitmask over base atoms) satisfies the atom.
bool world_satisfies(const Network& net, int atom_id, std::uint32_t w);

/** Encodes every non-vacuous off-diagonal entry as the two rows
 *      P(T and G) - hi P(G) <= 0    and    lo P(G) - P(T and G) <= 0
 *  plus one mass-floor row per mentioned base atom. Throws TooManyAtoms
 *  beyond the cap unless forced. */
FractionalProgram build_world_lp(const Network& net, const QueryExpr& q, bool maximize,
                                 const OracleOptions& opt = {});

/** Charnes-Cooper substitution y = x / (denominator . x): returns the
 *  equivalent linear program over (y, t) with rows . y <= 0,
 *  denominator . y = 1 and sum y - t = 0. Throws DegenerateDenominator when
 *  the denominator is identically zero. */
LinearProgram charnes_cooper(const FractionalProgram& fp);

/** Exact query bounds: solves the two linear programs and verifies each
 *  optimum by direct substitution into the fractional program. Throws
 *  Inconsistent for an infeasible KB and DegenerateDenominator when no
 *  model gives the conditioning event positive mass. */
Interval exact_bounds(const Network& net, const QueryExpr& q, const OracleOptions& opt = {});

struct Verdict {
    bool consistent = false;
    /// Constraint descriptions participating in the infeasibility.
    std::vector<std::string> certificate;
};

/// One feasibility program decides consistency of the whole KB.
Verdict check_consistency(const Network& net, const OracleOptions& opt = {});

} // namespace credal

#endif
