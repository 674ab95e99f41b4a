#ifndef CREDAL_SIMPLEX_HPP
#define CREDAL_SIMPLEX_HPP

#include <vector>

#include "credal/errors.hpp"

namespace credal {

/** A dense linear program over nonnegative variables:
 *      opt  c.x   s.t. rows, x >= 0
 *  where each row is coeffs.x REL rhs with REL one of <=, >=, =. */
struct LinearProgram {
    bool maximize = true;
    std::vector<double> objective;

    struct Row {
        std::vector<double> coeffs;
        double rhs = 0.0;
        char rel = 'L'; // 'L' <=, 'G' >=, 'E' =
    };
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(objective.size()); }
    void add_row(std::vector<double> coeffs, char rel, double rhs) {
        rows.push_back(Row{std::move(coeffs), rhs, rel});
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    /// Phase-1 row multipliers; nonzero entries locate an infeasible subsystem.
    std::vector<double> row_duals;
};

/** Two-phase primal simplex on a dense tableau. Bland's rule throughout
 *  (the programs built here are heavily degenerate), pivot tolerance 1e-9,
 *  defensive cap of 1e6 pivots (IterationLimit beyond). */
LpSolution solve_simplex(const LinearProgram& lp);

} // namespace credal

#endif
