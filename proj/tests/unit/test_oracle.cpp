#include <doctest.h>

#include <cmath>
#include <random>

#include "credal/lp_oracle.hpp"
#include "support.hpp"

using namespace credal;

namespace {

QueryExpr atom_query(int t, int g) {
    QueryExpr q;
    q.target = QuerySide{QuerySide::Atom, t, -1};
    q.given = QuerySide{QuerySide::Atom, g, -1};
    return q;
}

} // namespace

TEST_CASE("build_world_lp sizes and masks") {
    Network net;
    for (int i = 0; i < 5; ++i) net.add_atom(std::string(1, char('a' + i)));
    net.set(1, 0, Interval(0.3, 0.8));
    QueryExpr q = atom_query(1, 0);
    FractionalProgram fp = build_world_lp(net, q, true);
    CHECK(fp.n_worlds == 32);
    CHECK(fp.n_base == 5);

    // numerator counts worlds with both bits, denominator worlds with the given bit
    for (int w = 0; w < 32; ++w) {
        bool in_a = (w >> 0) & 1, in_b = (w >> 1) & 1;
        CHECK(fp.denominator[size_t(w)] == (in_a ? 1.0 : 0.0));
        CHECK(fp.numerator[size_t(w)] == (in_a && in_b ? 1.0 : 0.0));
    }
}

TEST_CASE("conjunction query masks intersect base atoms") {
    Network net;
    net.add_atom("a");
    net.add_atom("b");
    net.add_atom("c");
    net.set(2, 0, Interval(0.2, 0.9));
    QueryExpr q;
    q.target = QuerySide{QuerySide::Atom, 2, -1};
    q.given = QuerySide{QuerySide::And, 0, 1};
    FractionalProgram fp = build_world_lp(net, q, true);
    for (int w = 0; w < 8; ++w) {
        bool a = w & 1, b = (w >> 1) & 1, c = (w >> 2) & 1;
        CHECK(fp.denominator[size_t(w)] == (a && b ? 1.0 : 0.0));
        CHECK(fp.numerator[size_t(w)] == (a && b && c ? 1.0 : 0.0));
    }
}

TEST_CASE("certain entries collapse to a zero-mass row") {
    Network net;
    net.add_atom("a");
    net.add_atom("b");
    net.set(1, 0, Interval::certain()); // P(b|a) = 1
    QueryExpr q = atom_query(1, 0);
    FractionalProgram fp = build_world_lp(net, q, true);
    // only the lower row survives (upper is trivial at hi = 1); satisfied
    // exactly when the a-and-not-b worlds carry no mass
    std::vector<double> ok = {0.1, 0.0, 0.4, 0.5};  // worlds: -, a, b, ab
    std::vector<double> bad = {0.1, 0.2, 0.3, 0.4};
    int kb_rows = 0;
    for (size_t r = 0; r < fp.rows.size(); ++r) {
        if (fp.row_labels[r].rfind("mass", 0) == 0) continue;
        ++kb_rows;
        double lhs_ok = 0, lhs_bad = 0;
        for (int w = 0; w < 4; ++w) {
            lhs_ok += fp.rows[r][size_t(w)] * ok[size_t(w)];
            lhs_bad += fp.rows[r][size_t(w)] * bad[size_t(w)];
        }
        CHECK(lhs_ok <= 1e-12);
        CHECK(lhs_bad > 1e-9);
    }
    CHECK(kb_rows == 1);
}

TEST_CASE("oracle refuses oversized networks unless forced") {
    Network net;
    for (int i = 0; i < 13; ++i) net.add_atom("a" + std::to_string(i));
    net.set(1, 0, Interval(0.5, 0.6));
    CHECK_THROWS_AS(build_world_lp(net, atom_query(1, 0), true), TooManyAtoms);
    OracleOptions forced;
    forced.force = true;
    CHECK(build_world_lp(net, atom_query(1, 0), true, forced).n_worlds == 1 << 13);
}

TEST_CASE("charnes_cooper structure") {
    Network net;
    net.add_atom("a");
    net.add_atom("b");
    net.set(1, 0, Interval(0.4, 0.7));
    FractionalProgram fp = build_world_lp(net, atom_query(1, 0), true);
    LinearProgram lp = charnes_cooper(fp);
    CHECK(lp.num_vars() == fp.n_worlds + 1); // scale variable t
    REQUIRE(lp.rows.size() == fp.rows.size() + 2);
    // denominator row: d . y = 1
    const auto& denom_row = lp.rows[fp.rows.size()];
    CHECK(denom_row.rel == 'E');
    CHECK(denom_row.rhs == 1.0);
    // scaled simplex-sum: sum y - t = 0
    const auto& sum_row = lp.rows[fp.rows.size() + 1];
    CHECK(sum_row.rel == 'E');
    CHECK(sum_row.rhs == 0.0);
    CHECK(sum_row.coeffs.back() == -1.0);

    FractionalProgram degenerate = fp;
    degenerate.denominator.assign(degenerate.denominator.size(), 0.0);
    CHECK_THROWS_AS(charnes_cooper(degenerate), DegenerateDenominator);
}

TEST_CASE("charnes_cooper optimum maps back to the fractional program") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> natoms(3, 4);
    for (int trial = 0; trial < 25; ++trial) {
        int n = natoms(rng);
        auto x = testsup::random_distribution(rng, n);
        Network net = testsup::witness_network(rng, x, n);
        std::uniform_int_distribution<int> pick(0, n - 1);
        int t = pick(rng), g = pick(rng);
        if (t == g) continue;
        FractionalProgram fp = build_world_lp(net, atom_query(t, g), trial % 2 == 0);
        LpSolution sol = solve_simplex(charnes_cooper(fp));
        REQUIRE(sol.status == LpStatus::Optimal);

        double total = 0.0;
        for (int w = 0; w < fp.n_worlds; ++w) total += sol.x[size_t(w)];
        REQUIRE(total > 0.0);
        double num = 0.0, den = 0.0;
        for (int w = 0; w < fp.n_worlds; ++w) {
            double xw = sol.x[size_t(w)] / total;
            CHECK(xw >= -1e-12);
            num += fp.numerator[size_t(w)] * xw;
            den += fp.denominator[size_t(w)] * xw;
        }
        CHECK(std::abs(num / den - sol.value) <= 1e-9);
        for (const auto& row : fp.rows) {
            double lhs = 0.0;
            for (int w = 0; w < fp.n_worlds; ++w) lhs += row[size_t(w)] * sol.x[size_t(w)] / total;
            CHECK(lhs <= 1e-8);
        }
    }
}

TEST_CASE("exact_bounds echoes a single constraint") {
    Network net = parse_kb(std::string("cond b | a = [0.4, 0.7]\n"));
    Interval v = exact_bounds(net, atom_query(net.find_atom("b"), net.find_atom("a")));
    CHECK(v.lo() == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(v.hi() == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("exact_bounds: certainty is transitive under the mass floor") {
    Network net = parse_kb(std::string("cond b | a = [1,1]\ncond c | b = [1,1]\n"));
    Interval v = exact_bounds(net, atom_query(net.find_atom("c"), net.find_atom("a")));
    CHECK(v.lo() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(v.hi() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("check_consistency") {
    SUBCASE("empty KB is consistent") {
        Network net;
        net.add_atom("a");
        net.add_atom("b");
        CHECK(check_consistency(net).consistent);
    }
    SUBCASE("equal classes with incompatible conditionals are not") {
        Network net = parse_kb(std::string(
            "cond b | a = [1,1]\ncond a | b = [1,1]\ncond c | a = [0.9,1]\ncond c | b = [0,0.1]\n"));
        Verdict v = check_consistency(net);
        CHECK_FALSE(v.consistent);
        CHECK_FALSE(v.certificate.empty());
    }
}

TEST_CASE("constraint rows are scale invariant") {
    std::mt19937 rng(17);
    auto x = testsup::random_distribution(rng, 3);
    Network net = testsup::witness_network(rng, x, 3, 0.1, 0.0);
    FractionalProgram fp = build_world_lp(net, atom_query(1, 0), true);
    for (const auto& row : fp.rows) {
        double lhs = 0.0, lhs3 = 0.0;
        for (int w = 0; w < fp.n_worlds; ++w) {
            lhs += row[size_t(w)] * x[size_t(w)];
            lhs3 += row[size_t(w)] * 3.0 * x[size_t(w)];
        }
        CHECK(lhs <= 1e-9);
        CHECK(lhs3 <= 3e-9); // homogeneous rows stay satisfied under scaling
    }
}

TEST_CASE("exact_bounds never widens as constraints are added") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = testsup::random_distribution(rng, 4);
        Network net = testsup::witness_network(rng, x, 4, 0.2, 0.5);
        QueryExpr q = atom_query(2, 0);
        Interval loose = exact_bounds(net, q);
        // add a valid constraint on a vacuous arc
        bool added = false;
        for (int t = 0; t < 4 && !added; ++t) {
            for (int g = 0; g < 4 && !added; ++g) {
                if (t == g || !net.at(t, g).is_vacuous()) continue;
                double p = testsup::conditional(x, t, g);
                net.set(t, g, Interval(std::max(0.0, p - 0.05), std::min(1.0, p + 0.05)));
                added = true;
            }
        }
        if (!added) continue;
        Interval tight = exact_bounds(net, q);
        CHECK(tight.lo() >= loose.lo() - 1e-9);
        CHECK(tight.hi() <= loose.hi() + 1e-9);
    }
}
