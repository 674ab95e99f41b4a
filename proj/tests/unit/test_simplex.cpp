#include <doctest.h>

#include <random>

#include "credal/simplex.hpp"
#include "support.hpp"

using namespace credal;

TEST_CASE("simplex solves trivial programs") {
    SUBCASE("max y1 subject to y1 + y2 = 1") {
        LinearProgram lp;
        lp.maximize = true;
        lp.objective = {1.0, 0.0};
        lp.add_row({1.0, 1.0}, 'E', 1.0);
        LpSolution s = solve_simplex(lp);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("max y1 subject to y1 <= 0.3, y1 + y2 = 1") {
        LinearProgram lp;
        lp.maximize = true;
        lp.objective = {1.0, 0.0};
        lp.add_row({1.0, 0.0}, 'L', 0.3);
        lp.add_row({1.0, 1.0}, 'E', 1.0);
        LpSolution s = solve_simplex(lp);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(s.x[0] == doctest::Approx(0.3).epsilon(1e-9));
    }
}

TEST_CASE("simplex reports infeasibility with row multipliers") {
    LinearProgram lp;
    lp.maximize = false;
    lp.objective = {1.0};
    lp.add_row({1.0}, 'G', 2.0);
    lp.add_row({1.0}, 'L', 1.0);
    LpSolution s = solve_simplex(lp);
    REQUIRE(s.status == LpStatus::Infeasible);
    REQUIRE(s.row_duals.size() == 2);
    bool some_nonzero = false;
    for (double d : s.row_duals) some_nonzero |= std::abs(d) > 1e-7;
    CHECK(some_nonzero);
}

TEST_CASE("simplex reports unboundedness") {
    LinearProgram lp;
    lp.maximize = true;
    lp.objective = {1.0, 0.0};
    lp.add_row({0.0, 1.0}, 'E', 1.0);
    LpSolution s = solve_simplex(lp);
    CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("simplex matches brute-force vertex enumeration") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> nvars(2, 6);
    std::uniform_int_distribution<int> nrows(1, 4);
    int solved = 0;
    for (int trial = 0; trial < 120; ++trial) {
        int n = nvars(rng);
        LinearProgram lp;
        lp.maximize = trial % 2 == 0;
        lp.objective.resize(size_t(n));
        for (double& c : lp.objective) c = U(rng);
        int k = nrows(rng);
        for (int r = 0; r < k; ++r) {
            std::vector<double> coeffs(size_t(n));
            for (double& c : coeffs) c = U(rng);
            double rhs = trial % 3 == 0 ? 0.0 : std::abs(U(rng));
            lp.add_row(std::move(coeffs), 'L', rhs);
        }
        // normalization row keeps the feasible set bounded
        lp.add_row(std::vector<double>(size_t(n), 1.0), 'E', 1.0);

        testsup::VertexOracle ref = testsup::vertex_enumerate(lp);
        LpSolution s = solve_simplex(lp);
        if (!ref.feasible) {
            CHECK(s.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.value == doctest::Approx(ref.best).epsilon(1e-7));
        ++solved;
    }
    CHECK(solved > 60); // the generator must actually exercise the solver
}
