#include "credal/saturation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "credal/rules.hpp"

namespace credal {

namespace {

std::string circuit_to_string(const Network& net, const CircuitViolation& v) {
    std::string s = "positive circuit";
    char buf[32];
    std::snprintf(buf, sizeof(buf), " (log excess %.3e):", v.excess);
    s += buf;
    for (size_t i = 0; i < v.circuit.size(); ++i) {
        s += i == 0 ? " " : " -> ";
        s += net.atom(v.circuit[static_cast<size_t>(i)]).name;
    }
    return s;
}

} // namespace

SaturationReport saturate(Network& net, double tol, int max_outer) {
    SaturationReport rep;
    auto start = std::chrono::steady_clock::now();
    size_t trace_start = net.trace().size();

    if (net.atom_count() > kMaxSaturationAtoms) {
        throw TooManyAtoms("saturation accepts at most " + std::to_string(kMaxSaturationAtoms) +
                           " atoms");
    }

    // Snapshot for the changed-arc count.
    const int n = net.atom_count();
    std::vector<Interval> before(static_cast<size_t>(n) * n);
    for (int t = 0; t < n; ++t)
        for (int g = 0; g < n; ++g) before[static_cast<size_t>(t) * n + g] = net.at(t, g);

    auto finish = [&](SatStatus status, std::string witness) {
        rep.status = status;
        rep.witness = std::move(witness);
        rep.wall_time = std::chrono::steady_clock::now() - start;
        rep.trace.assign(net.trace().begin() + static_cast<long>(trace_start), net.trace().end());
        int changed = 0;
        for (int t = 0; t < n; ++t) {
            for (int g = 0; g < n; ++g) {
                const Interval& was = before[static_cast<size_t>(t) * n + g];
                const Interval& now = net.at(t, g);
                if (std::abs(now.lo() - was.lo()) > tol || std::abs(was.hi() - now.hi()) > tol) {
                    ++changed;
                }
            }
        }
        rep.changed_arcs = changed;
        return rep;
    };

    try {
        if (auto v = cycle_check(net)) {
            return finish(SatStatus::Inconsistent, circuit_to_string(net, *v));
        }
        for (int iter = 1; iter <= max_outer; ++iter) {
            rep.iterations = iter;
            bool changed = qs_sweep(net, tol, iter);
            if (auto v = cycle_check(net)) {
                return finish(SatStatus::Inconsistent, circuit_to_string(net, *v));
            }
            changed |= bg_tighten(net, tol, iter);
            changed |= indep_sweep(net, tol, iter);
            if (!changed) return finish(SatStatus::Saturated, "");
        }
        return finish(SatStatus::MaxIterations, "");
    } catch (const Inconsistent& e) {
        return finish(SatStatus::Inconsistent, e.what());
    } catch (const EmptyIntersection& e) {
        return finish(SatStatus::Inconsistent, e.what());
    }
}

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

QuerySide parse_side(const Network& net, std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw SyntaxError(0, "empty query side");
    size_t amp = s.find('&');
    size_t plus = s.find('+');
    if (amp != std::string::npos && plus != std::string::npos) {
        throw SyntaxError(0, "query side mixes '&' and '+'");
    }
    QuerySide side;
    auto resolve = [&](const std::string& name) {
        int id = net.find_atom(name);
        if (id < 0) throw UnknownAtom("unknown atom '" + name + "' in query");
        return id;
    };
    size_t sep = amp != std::string::npos ? amp : plus;
    if (sep == std::string::npos) {
        side.kind = QuerySide::Atom;
        side.a = resolve(s);
        return side;
    }
    side.kind = amp != std::string::npos ? QuerySide::And : QuerySide::Or;
    std::string left = trim(s.substr(0, sep));
    std::string right = trim(s.substr(sep + 1));
    if (left.empty() || right.empty()) throw SyntaxError(0, "malformed query side '" + s + "'");
    if (right.find('&') != std::string::npos || right.find('+') != std::string::npos) {
        throw SyntaxError(0, "query sides combine at most two atoms");
    }
    side.a = resolve(left);
    side.b = resolve(right);
    if (side.a == side.b) throw SyntaxError(0, "query side repeats atom '" + left + "'");
    return side;
}

std::string side_label(const Network& net, const QuerySide& s) {
    switch (s.kind) {
    case QuerySide::Atom: return net.atom(s.a).name;
    case QuerySide::And: return net.atom(s.a).name + "&" + net.atom(s.b).name;
    case QuerySide::Or: return net.atom(s.a).name + "+" + net.atom(s.b).name;
    }
    return "?";
}

// Materializes a side in the network, returning the atom id to look up.
int side_atom(Network& net, const QuerySide& s) {
    switch (s.kind) {
    case QuerySide::Atom: return s.a;
    case QuerySide::And: return net.add_conjunction_node(s.a, s.b);
    case QuerySide::Or: return net.add_disjunction_node(s.a, s.b);
    }
    return -1;
}

} // namespace

QueryExpr parse_query(const Network& net, std::string_view text) {
    size_t bar = text.find('|');
    if (bar == std::string_view::npos) throw SyntaxError(0, "query needs 'TARGET | GIVEN'");
    if (text.find('|', bar + 1) != std::string_view::npos) {
        throw SyntaxError(0, "query has more than one '|'");
    }
    QueryExpr q;
    q.target = parse_side(net, text.substr(0, bar));
    q.given = parse_side(net, text.substr(bar + 1));
    return q;
}

std::string query_label(const Network& net, const QueryExpr& q) {
    return "P(" + side_label(net, q.target) + "|" + side_label(net, q.given) + ")";
}

QueryResult query(const Network& net, const QueryExpr& q) {
    if (q.target.kind == QuerySide::Atom && q.given.kind == QuerySide::Atom) {
        QueryResult r;
        r.bounds = net.at(q.target.a, q.given.a);
        for (const TraceStep& step : net.trace()) {
            if (step.target == q.target.a && step.given == q.given.a) r.steps.push_back(step);
        }
        return r;
    }

    // Composite side: extend a private clone and re-saturate.
    Network ext = net;
    int t = side_atom(ext, q.target);
    int g = side_atom(ext, q.given);
    SaturationReport rep = saturate(ext);
    if (rep.status == SatStatus::Inconsistent) {
        throw Inconsistent("query extension: " + rep.witness);
    }
    Interval result = ext.at(t, g);

    // Closed-form bounds apply when exactly one side is composite.
    Interval closed = Interval::vacuous();
    if (q.target.kind == QuerySide::And && q.given.kind == QuerySide::Atom) {
        closed = conj_closed_bounds(ext, q.target.a, q.target.b, q.given.a,
                                    ConjDirection::ABGivenC);
    } else if (q.target.kind == QuerySide::Atom && q.given.kind == QuerySide::And) {
        closed = conj_closed_bounds(ext, q.given.a, q.given.b, q.target.a,
                                    ConjDirection::CGivenAB);
    } else if (q.target.kind == QuerySide::Or && q.given.kind == QuerySide::Atom) {
        closed = disj_closed_bounds(ext, q.target.a, q.target.b, q.given.a,
                                    DisjDirection::AvBGivenC);
    } else if (q.target.kind == QuerySide::Atom && q.given.kind == QuerySide::Or) {
        closed = disj_closed_bounds(ext, q.given.a, q.given.b, q.target.a,
                                    DisjDirection::CGivenAvB);
    }
    if (!closed.is_vacuous()) {
        Rule rule = (q.target.kind == QuerySide::And || q.given.kind == QuerySide::And)
                        ? Rule::CONJ
                        : Rule::DISJ;
        ext.tighten(t, g, closed, rule, {t, g}, rep.iterations + 1, 0.0);
        result = ext.at(t, g);
    }

    QueryResult r;
    r.bounds = result;
    for (const TraceStep& step : ext.trace()) {
        if (step.target == t && step.given == g) r.steps.push_back(step);
    }
    return r;
}

} // namespace credal
