#include <doctest.h>

#include <random>
#include <sstream>

#include "credal/network.hpp"
#include "credal/rules.hpp"
#include "support.hpp"

using namespace credal;

TEST_CASE("parse_kb basics") {
    Network net = parse_kb(std::string("cond sport | student = [0.90, 0.90]\n"));
    int sport = net.find_atom("sport");
    int student = net.find_atom("student");
    REQUIRE(sport >= 0);
    REQUIRE(student >= 0);
    CHECK(net.at(sport, student) == Interval(0.9, 0.9));
    CHECK(net.at(sport, sport) == Interval::certain());
    CHECK(net.at(student, sport).is_vacuous());
}

TEST_CASE("parse_kb rejects inverted and out-of-range bounds") {
    CHECK_THROWS_AS(parse_kb(std::string("cond b | a = [0.5, 0.3]\n")), BoundsError);
    CHECK_THROWS_AS(parse_kb(std::string("cond b | a = [0.5, 1.5]\n")), BoundsError);
}

TEST_CASE("parse_kb intersects duplicate pairs") {
    Network net = parse_kb(std::string("cond b | a = [0.2, 0.8]\ncond b | a = [0.5, 1]\n"));
    CHECK(net.at(net.find_atom("b"), net.find_atom("a")) == Interval(0.5, 0.8));
    CHECK_THROWS_AS(parse_kb(std::string("cond b | a = [0.0, 0.3]\ncond b | a = [0.7, 1]\n")),
                    Inconsistent);
}

TEST_CASE("parse_kb syntax errors carry line numbers") {
    try {
        parse_kb(std::string("atom a\nconq b | a = [0,1]\n"));
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_kb(std::string("cond b a = [0,1]\n")), SyntaxError);
    CHECK_THROWS_AS(parse_kb(std::string("cond b | a = [0.1234567, 1]\n")), SyntaxError);
    CHECK_THROWS_AS(parse_kb(std::string("atom a&b\n")), SyntaxError);
    CHECK_THROWS_AS(parse_kb(std::string("atom a\natom a\n")), SyntaxError);
}

TEST_CASE("comments and blank lines are skipped") {
    Network net = parse_kb(std::string("# heading\n\n  \natom a\n# more\ncond b | a = [0,0.5]\n"));
    CHECK(net.atom_count() == 2);
}

TEST_CASE("indep parsing and strict mode") {
    Network net = parse_kb(std::string("atom a\natom b\natom c\nindep ii a ; b ; c\n"));
    REQUIRE(net.indeps().size() == 1);
    CHECK(net.indeps()[0].kind == IndepKind::II);
    CHECK_THROWS_AS(parse_kb(std::string("atom a\natom b\nindep i a ; b ; zz\n")), UnknownAtom);
    Network lax = parse_kb(std::string("atom a\natom b\nindep i a ; b ; zz\n"), false);
    CHECK(lax.atom_count() == 3);
    CHECK_THROWS_AS(parse_kb(std::string("atom a\natom b\natom c\nindep iv a ; b ; c\n")),
                    SyntaxError);
}

TEST_CASE("serialize round-trips at six decimals") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = testsup::random_distribution(rng, 4);
        Network net = testsup::witness_network(rng, x, 4);
        net.add_indep(IndepDecl{IndepKind::II, 0, 1, 2});
        std::string text = serialize(net);
        Network back = parse_kb(text);
        REQUIRE(back.atom_count() == net.atom_count());
        for (int t = 0; t < 4; ++t) {
            for (int g = 0; g < 4; ++g) {
                CHECK(std::abs(back.at(t, g).lo() - net.at(t, g).lo()) <= 5e-7);
                CHECK(std::abs(back.at(t, g).hi() - net.at(t, g).hi()) <= 5e-7);
            }
        }
        REQUIRE(back.indeps().size() == 1);
        CHECK(back.indeps()[0] == net.indeps()[0]);
        // a second round-trip is exact
        CHECK(serialize(back) == text);
    }
}

TEST_CASE("conjunction node wiring") {
    Network net = parse_kb(std::string("cond b | a = [0.6, 0.7]\ncond a | b = [0.3, 0.5]\n"));
    int a = net.find_atom("a"), b = net.find_atom("b");
    Network before = net;
    int ab = net.add_conjunction_node(a, b);

    CHECK(net.at(ab, a) == Interval(0.6, 0.7)); // P(a&b | a) = P(b | a)
    CHECK(net.at(ab, b) == Interval(0.3, 0.5));
    CHECK(net.at(a, ab) == Interval::certain());
    CHECK(net.at(b, ab) == Interval::certain());
    CHECK(net.atom(ab).kind == AtomKind::Conjunction);

    // registry is order insensitive
    CHECK(net.add_conjunction_node(b, a) == ab);
    CHECK(net.atom_count() == 3);

    // pre-existing entries unchanged
    for (int t = 0; t < 2; ++t)
        for (int g = 0; g < 2; ++g) CHECK(net.at(t, g) == before.at(t, g));

    CHECK_THROWS_AS(net.add_conjunction_node(a, a), NotBaseAtom);
    CHECK_THROWS_AS(net.add_conjunction_node(a, ab), NotBaseAtom);
}

TEST_CASE("disjunction node wiring") {
    SUBCASE("certain membership when P(a|b) = 1") {
        Network net = parse_kb(std::string("cond a | b = [1,1]\ncond b | a = [0.4, 0.4]\n"));
        int a = net.find_atom("a"), b = net.find_atom("b");
        int any = net.add_disjunction_node(a, b);
        CHECK(net.at(a, any) == Interval::certain());
        CHECK(net.at(any, a) == Interval::certain());
        CHECK(net.at(any, b) == Interval::certain());
    }
    SUBCASE("subset case P(b|a) = 1 gives membership P(a|b)") {
        Network net = parse_kb(std::string("cond b | a = [1,1]\ncond a | b = [0.3, 0.3]\n"));
        int a = net.find_atom("a"), b = net.find_atom("b");
        int any = net.add_disjunction_node(a, b);
        CHECK(net.at(a, any).lo() == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(net.at(a, any).hi() == doctest::Approx(0.3).epsilon(1e-12));
    }
    SUBCASE("membership arcs stay vacuous without lower mass") {
        Network net = parse_kb(std::string("cond a | b = [0, 0.5]\ncond b | a = [0, 0.5]\n"));
        int a = net.find_atom("a"), b = net.find_atom("b");
        int any = net.add_disjunction_node(a, b);
        CHECK(net.at(a, any).is_vacuous());
        CHECK(net.at(b, any).is_vacuous());
    }
}

TEST_CASE("disjunction membership against world enumeration") {
    // With P(a|b) = P(b|a) = 1/2 every consistent mass assignment has
    // |a only| = |b only| = |a and b|, so P(a | a or b) is exactly 2/3.
    // Enumerate mass triples on a grid and check.
    int hits = 0;
    const int steps = 64;
    for (int ui = 1; ui < steps; ++ui) {
        for (int vi = 0; vi < steps; ++vi) {
            for (int wi = 0; wi < steps; ++wi) {
                double u = double(ui) / steps;  // a and b
                double v = double(vi) / steps;  // a only
                double w = double(wi) / steps;  // b only
                if (u + v + w > 1.0) continue;
                double p_ab = u / (u + w);
                double p_ba = u / (u + v);
                if (std::abs(p_ab - 0.5) > 1e-12 || std::abs(p_ba - 0.5) > 1e-12) continue;
                ++hits;
                double membership = (u + v) / (u + v + w);
                CHECK(membership == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
            }
        }
    }
    CHECK(hits > 0);
    Interval m = disj_membership(Interval(0.5, 0.5), Interval(0.5, 0.5));
    CHECK(m.lo() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.hi() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("diagonal cond lines must admit certainty") {
    Network net = parse_kb(std::string("cond a | a = [0.5, 1]\n"));
    CHECK(net.at(0, 0) == Interval::certain());
    CHECK_THROWS_AS(parse_kb(std::string("cond a | a = [0, 0.5]\n")), Inconsistent);
}
