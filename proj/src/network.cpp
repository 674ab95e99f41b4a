#include "credal/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "credal/rules.hpp"

namespace credal {

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::QS: return "QS";
    case Rule::BG: return "BG";
    case Rule::INDEP: return "INDEP";
    case Rule::CONJ: return "CONJ";
    case Rule::DISJ: return "DISJ";
    case Rule::INTERSECT: return "INTERSECT";
    }
    return "?";
}

namespace {

const std::string kReservedChars = "|&+;=[],#";

bool valid_atom_name(const std::string& name) {
    if (name.empty()) return false;
    for (char ch : name) {
        if (std::isspace(static_cast<unsigned char>(ch))) return false;
        if (kReservedChars.find(ch) != std::string::npos) return false;
    }
    return true;
}

} // namespace

int Network::add_atom(const std::string& name) {
    if (!valid_atom_name(name)) {
        throw SyntaxError(0, "invalid atom name '" + name + "'");
    }
    if (find_atom(name) >= 0) {
        throw SyntaxError(0, "duplicate atom '" + name + "'");
    }
    Atom a;
    a.name = name;
    return append_atom(std::move(a));
}

int Network::append_atom(Atom a) {
    int n = atom_count();
    a.id = n;
    // Rebuild the bounds table with one more row and column.
    std::vector<Interval> grown(static_cast<size_t>(n + 1) * (n + 1));
    for (int t = 0; t < n; ++t)
        for (int g = 0; g < n; ++g)
            grown[static_cast<size_t>(t) * (n + 1) + g] = bounds_[static_cast<size_t>(t) * n + g];
    atoms_.push_back(std::move(a));
    bounds_ = std::move(grown);
    set(n, n, Interval::certain());
    return n;
}

int Network::find_atom(std::string_view name) const {
    for (const Atom& a : atoms_)
        if (a.name == name) return a.id;
    return -1;
}

int Network::base_atom_count() const {
    int n = 0;
    for (const Atom& a : atoms_)
        if (a.is_base()) ++n;
    return n;
}

const Interval& Network::at(int target, int given) const {
    return bounds_[idx(target, given)];
}

void Network::set(int target, int given, const Interval& v) {
    bounds_[idx(target, given)] = v;
}

std::string Network::arc_label(int target, int given) const {
    return "P(" + atom(target).name + "|" + atom(given).name + ")";
}

bool Network::tighten(int target, int given, const Interval& candidate, Rule rule,
                      std::vector<int> operands, int iteration, double eps) {
    const Interval before = at(target, given);
    Interval after;
    try {
        after = intersect(before, candidate);
    } catch (const EmptyIntersection& e) {
        std::string ops;
        for (int id : operands) ops += (ops.empty() ? "" : ",") + atom(id).name;
        throw Inconsistent(std::string(rule_name(rule)) + " on " + arc_label(target, given) +
                           " (operands " + ops + "): " + e.what());
    }
    if (after == before) return false;
    set(target, given, after);
    bool significant =
        std::abs(after.lo() - before.lo()) > eps || std::abs(before.hi() - after.hi()) > eps;
    if (significant) {
        trace_.push_back(
            TraceStep{rule, std::move(operands), target, given, before, after, iteration});
    }
    return significant;
}

void Network::add_indep(const IndepDecl& d) {
    for (int id : {d.a, d.b, d.c}) {
        if (id < 0 || id >= atom_count()) throw UnknownAtom("independence over unknown atom id");
        if (!atom(id).is_base()) throw NotBaseAtom("independence over non-base atom");
    }
    if (d.a == d.b || d.a == d.c || d.b == d.c) {
        throw NotBaseAtom("independence atoms must be distinct");
    }
    if (std::find(indeps_.begin(), indeps_.end(), d) == indeps_.end()) indeps_.push_back(d);
}

int Network::add_conjunction_node(int a, int b) {
    if (a == b) throw NotBaseAtom("conjunction of an atom with itself");
    if (!atom(a).is_base() || !atom(b).is_base()) {
        throw NotBaseAtom("conjunction parents must be base atoms");
    }
    auto key = std::make_tuple(0, std::min(a, b), std::max(a, b));
    if (auto it = aux_registry_.find(key); it != aux_registry_.end()) return it->second;

    Atom node;
    node.name = atom(a).name + "&" + atom(b).name;
    node.kind = AtomKind::Conjunction;
    node.left = a;
    node.right = b;
    int id = append_atom(std::move(node));
    aux_registry_[key] = id;

    set(a, id, Interval::certain());
    set(b, id, Interval::certain());
    set(id, a, at(b, a)); // P(a&b | a) = P(b | a)
    set(id, b, at(a, b));
    trace_.push_back(TraceStep{Rule::CONJ, {a, b}, id, a, Interval::vacuous(), at(id, a), 0});
    trace_.push_back(TraceStep{Rule::CONJ, {a, b}, id, b, Interval::vacuous(), at(id, b), 0});
    return id;
}

int Network::add_disjunction_node(int a, int b) {
    if (a == b) throw NotBaseAtom("disjunction of an atom with itself");
    if (!atom(a).is_base() || !atom(b).is_base()) {
        throw NotBaseAtom("disjunction parents must be base atoms");
    }
    auto key = std::make_tuple(1, std::min(a, b), std::max(a, b));
    if (auto it = aux_registry_.find(key); it != aux_registry_.end()) return it->second;

    Atom node;
    node.name = atom(a).name + "+" + atom(b).name;
    node.kind = AtomKind::Disjunction;
    node.left = a;
    node.right = b;
    int id = append_atom(std::move(node));
    aux_registry_[key] = id;

    set(id, a, Interval::certain());
    set(id, b, Interval::certain());
    const Interval ab = at(a, b); // P(a|b)
    const Interval ba = at(b, a); // P(b|a)
    // Membership arcs need some certain mass on one side; otherwise vacuous.
    if (ab.lo() + ba.lo() > 0.0) {
        set(a, id, disj_membership(ab, ba));
        set(b, id, disj_membership(ba, ab));
        trace_.push_back(TraceStep{Rule::DISJ, {a, b}, a, id, Interval::vacuous(), at(a, id), 0});
        trace_.push_back(TraceStep{Rule::DISJ, {a, b}, b, id, Interval::vacuous(), at(b, id), 0});
    }
    return id;
}

namespace {

struct Token {
    enum Kind { Name, Number, Punct, End } kind;
    std::string text;
};

class LineLexer {
public:
    LineLexer(const std::string& line, int line_no) : s_(line), line_no_(line_no) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) return {Token::End, ""};
        char ch = s_[pos_];
        if (std::string("|=[],;").find(ch) != std::string::npos) {
            ++pos_;
            return {Token::Punct, std::string(1, ch)};
        }
        size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               std::string("|=[],;").find(s_[pos_]) == std::string::npos) {
            ++pos_;
        }
        std::string text = s_.substr(start, pos_ - start);
        bool numeric = !text.empty() &&
                       text.find_first_not_of("0123456789.") == std::string::npos;
        return {numeric ? Token::Number : Token::Name, text};
    }

    Token expect(Token::Kind kind, const std::string& what) {
        Token t = next();
        if (t.kind != kind) {
            throw SyntaxError(line_no_, "expected " + what + (t.kind == Token::End
                                                                  ? " but line ended"
                                                                  : " before '" + t.text + "'"));
        }
        return t;
    }

    void expect_punct(char ch) {
        Token t = next();
        if (t.kind != Token::Punct || t.text[0] != ch) {
            throw SyntaxError(line_no_, std::string("expected '") + ch + "'");
        }
    }

    void expect_end() {
        Token t = next();
        if (t.kind != Token::End) {
            throw SyntaxError(line_no_, "unexpected trailing '" + t.text + "'");
        }
    }

private:
    const std::string& s_;
    int line_no_;
    size_t pos_ = 0;
};

double parse_prob(const std::string& text, int line_no) {
    if (text.empty()) throw SyntaxError(line_no, "empty number");
    size_t dot = text.find('.');
    if (dot != std::string::npos) {
        if (text.find('.', dot + 1) != std::string::npos) {
            throw SyntaxError(line_no, "malformed number '" + text + "'");
        }
        if (text.size() - dot - 1 > 6) {
            throw SyntaxError(line_no, "more than 6 fraction digits in '" + text + "'");
        }
    }
    size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw SyntaxError(line_no, "malformed number '" + text + "'");
    }
    if (pos != text.size()) throw SyntaxError(line_no, "malformed number '" + text + "'");
    if (v < 0.0 || v > 1.0) {
        throw BoundsError("line " + std::to_string(line_no) + ": probability " + text +
                          " outside [0,1]");
    }
    return v;
}

int declare_or_find(Network& net, const std::string& name, int line_no) {
    int id = net.find_atom(name);
    if (id >= 0) return id;
    try {
        return net.add_atom(name);
    } catch (const SyntaxError& e) {
        throw SyntaxError(line_no, e.what());
    }
}

} // namespace

Network parse_kb(std::istream& in, bool strict) {
    Network net;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;

        LineLexer lex(line, line_no);
        Token head = lex.expect(Token::Name, "directive");
        if (head.text == "atom") {
            Token name = lex.next();
            if (name.kind == Token::End) throw SyntaxError(line_no, "missing atom name");
            try {
                net.add_atom(name.text);
            } catch (const SyntaxError& e) {
                throw SyntaxError(line_no, e.what());
            }
            lex.expect_end();
        } else if (head.text == "cond") {
            Token target = lex.next();
            if (target.kind == Token::End) throw SyntaxError(line_no, "missing target atom");
            lex.expect_punct('|');
            Token given = lex.next();
            if (given.kind == Token::End) throw SyntaxError(line_no, "missing given atom");
            lex.expect_punct('=');
            lex.expect_punct('[');
            Token lo_tok = lex.expect(Token::Number, "lower bound");
            lex.expect_punct(',');
            Token hi_tok = lex.expect(Token::Number, "upper bound");
            lex.expect_punct(']');
            lex.expect_end();

            double lo = parse_prob(lo_tok.text, line_no);
            double hi = parse_prob(hi_tok.text, line_no);
            if (lo > hi) {
                throw BoundsError("line " + std::to_string(line_no) + ": lower bound " +
                                  lo_tok.text + " exceeds upper bound " + hi_tok.text);
            }
            int t = declare_or_find(net, target.text, line_no);
            int g = declare_or_find(net, given.text, line_no);
            try {
                net.tighten(t, g, Interval(lo, hi), Rule::INTERSECT, {t, g}, 0, 0.0);
            } catch (const Inconsistent& e) {
                throw Inconsistent("line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (head.text == "indep") {
            Token kind = lex.expect(Token::Name, "independence kind");
            IndepKind k;
            if (kind.text == "i") k = IndepKind::I;
            else if (kind.text == "ii") k = IndepKind::II;
            else if (kind.text == "iii") k = IndepKind::III;
            else throw SyntaxError(line_no, "unknown independence kind '" + kind.text + "'");
            Token a = lex.next();
            lex.expect_punct(';');
            Token b = lex.next();
            lex.expect_punct(';');
            Token c = lex.next();
            lex.expect_end();
            if (a.kind == Token::End || b.kind == Token::End || c.kind == Token::End) {
                throw SyntaxError(line_no, "independence needs three atoms");
            }
            int ids[3];
            const Token* toks[3] = {&a, &b, &c};
            for (int i = 0; i < 3; ++i) {
                int id = net.find_atom(toks[i]->text);
                if (id < 0) {
                    if (strict) {
                        throw UnknownAtom("line " + std::to_string(line_no) + ": unknown atom '" +
                                          toks[i]->text + "' in indep");
                    }
                    id = declare_or_find(net, toks[i]->text, line_no);
                }
                ids[i] = id;
            }
            net.add_indep(IndepDecl{k, ids[0], ids[1], ids[2]});
        } else {
            throw SyntaxError(line_no, "unknown directive '" + head.text + "'");
        }
    }
    return net;
}

Network parse_kb(const std::string& text, bool strict) {
    std::istringstream in(text);
    return parse_kb(in, strict);
}

namespace {

const char* indep_kind_name(IndepKind k) {
    switch (k) {
    case IndepKind::I: return "i";
    case IndepKind::II: return "ii";
    case IndepKind::III: return "iii";
    }
    return "?";
}

bool vacuous_at_six_decimals(const Interval& v) {
    return format_prob(v.lo()) == "0.000000" && format_prob(v.hi()) == "1.000000";
}

} // namespace

void serialize(const Network& net, std::ostream& out) {
    for (const Atom& a : net.atoms())
        if (a.is_base()) out << "atom " << a.name << "\n";
    int n = net.atom_count();
    for (int t = 0; t < n; ++t) {
        if (!net.atom(t).is_base()) continue;
        for (int g = 0; g < n; ++g) {
            if (t == g || !net.atom(g).is_base()) continue;
            const Interval& v = net.at(t, g);
            if (vacuous_at_six_decimals(v)) continue;
            out << "cond " << net.atom(t).name << " | " << net.atom(g).name << " = ["
                << format_prob(v.lo()) << ", " << format_prob(v.hi()) << "]\n";
        }
    }
    for (const IndepDecl& d : net.indeps()) {
        out << "indep " << indep_kind_name(d.kind) << " " << net.atom(d.a).name << " ; "
            << net.atom(d.b).name << " ; " << net.atom(d.c).name << "\n";
    }
}

std::string serialize(const Network& net) {
    std::ostringstream out;
    serialize(net, out);
    return out.str();
}

} // namespace credal
