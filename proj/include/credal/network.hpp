#ifndef CREDAL_NETWORK_HPP
#define CREDAL_NETWORK_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "credal/interval.hpp"

namespace credal {

enum class AtomKind { Base, Conjunction, Disjunction };

struct Atom {
    int id = -1;
    std::string name;
    AtomKind kind = AtomKind::Base;
    // Parent atom ids for conjunction/disjunction nodes, -1 otherwise.
    int left = -1;
    int right = -1;

    bool is_base() const { return kind == AtomKind::Base; }
};

enum class IndepKind { I, II, III };

/// Conditional independence declaration over an ordered atom triple (A, B, C).
struct IndepDecl {
    IndepKind kind;
    int a = -1;
    int b = -1;
    int c = -1;

    friend bool operator==(const IndepDecl& x, const IndepDecl& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

enum class Rule { QS, BG, INDEP, CONJ, DISJ, INTERSECT };

const char* rule_name(Rule r);

/// One bound-tightening event. `target`/`given` identify the arc whose entry
/// changed; `operands` are the atom ids the rule consumed.
struct TraceStep {
    Rule rule;
    std::vector<int> operands;
    int target = -1;
    int given = -1;
    Interval before;
    Interval after;
    int iteration = 0;
};

using DerivationTrace = std::vector<TraceStep>;

/** The knowledge base: atoms, an n-by-n table of probability intervals where
 *  entry (t, g) constrains P(A_t | A_g), independence declarations, and the
 *  derivation trace accumulated by the inference rules.
 */
class Network {
public:
    Network() = default;

    /// Declares a base atom. Throws SyntaxError on invalid or duplicate names.
    int add_atom(const std::string& name);

    /// Id of the named atom, or -1.
    int find_atom(std::string_view name) const;

    int atom_count() const { return static_cast<int>(atoms_.size()); }
    int base_atom_count() const;
    const Atom& atom(int id) const { return atoms_[static_cast<size_t>(id)]; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    const Interval& at(int target, int given) const;
    void set(int target, int given, const Interval& v);

    /** Intersects `candidate` into entry (target, given). Records a trace step
     *  and returns true when either endpoint moved by more than `eps`.
     *  Throws Inconsistent when the intersection is empty. */
    bool tighten(int target, int given, const Interval& candidate, Rule rule,
                 std::vector<int> operands, int iteration, double eps);

    void add_indep(const IndepDecl& d);
    const std::vector<IndepDecl>& indeps() const { return indeps_; }

    /** Appends an auxiliary node for the conjunction of two distinct base
     *  atoms, or returns the existing one (registry is order-insensitive).
     *  Membership arcs are forced certain and the coupling bounds are copies
     *  of P(b|a) and P(a|b). */
    int add_conjunction_node(int a, int b);

    /** Appends an auxiliary node for the disjunction of two distinct base
     *  atoms. P(a or b | a) and P(a or b | b) are certain; the membership
     *  arcs P(a | a or b), P(b | a or b) come from disj_membership and stay
     *  vacuous when both membership lower bounds are zero. */
    int add_disjunction_node(int a, int b);

    DerivationTrace& trace() { return trace_; }
    const DerivationTrace& trace() const { return trace_; }

    std::string arc_label(int target, int given) const;

private:
    int append_atom(Atom a);
    size_t idx(int target, int given) const {
        return static_cast<size_t>(target) * atoms_.size() + static_cast<size_t>(given);
    }

    std::vector<Atom> atoms_;
    std::vector<Interval> bounds_; // row-major, entry (t, g) = P(A_t | A_g)
    std::vector<IndepDecl> indeps_;
    std::map<std::tuple<int, int, int>, int> aux_registry_; // (kind, min, max) -> id
    DerivationTrace trace_;
};

/** Parses the line-oriented KB format:
 *
 *      # comment
 *      atom NAME
 *      cond TARGET | GIVEN = [LO, HI]
 *      indep KIND A ; B ; C          (KIND one of i, ii, iii)
 *
 *  Atoms named in `cond` lines are auto-declared in order of first
 *  appearance. Repeated `cond` lines for the same ordered pair intersect.
 *  With `strict`, `indep` lines may only reference declared atoms. */
Network parse_kb(std::istream& in, bool strict = true);
Network parse_kb(const std::string& text, bool strict = true);

/// Emits atoms, then non-vacuous off-diagonal `cond` entries in row-major
/// (target, given) order at six decimals, then `indep` lines. Output is
/// valid parse_kb input. Auxiliary atoms are skipped.
void serialize(const Network& net, std::ostream& out);
std::string serialize(const Network& net);

} // namespace credal

#endif
