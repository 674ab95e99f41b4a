#include "credal/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "credal/lp_oracle.hpp"
#include "credal/network.hpp"
#include "credal/rules.hpp"
#include "credal/saturation.hpp"

namespace credal {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitUnsound = 3;

struct CliConfig {
    std::string command;
    std::string kb_path;
    std::string query_string;
    double tol = 1e-9;
    int max_outer = 100;
    double eps_mass = 1e-6;
    std::string output_path;
    bool trace = false;
    bool force = false;
    bool json_out = false;
};

Network load_kb(const CliConfig& cfg) {
    std::ifstream in(cfg.kb_path);
    if (!in) throw Error("cannot open '" + cfg.kb_path + "'");
    return parse_kb(in);
}

std::string trace_line(const Network& net, const TraceStep& s) {
    std::string ops;
    for (int id : s.operands) ops += (ops.empty() ? "" : ",") + net.atom(id).name;
    std::ostringstream line;
    line << rule_name(s.rule) << " (" << ops << ") " << net.arc_label(s.target, s.given) << " "
         << to_string(s.before) << " -> " << to_string(s.after) << " iter " << s.iteration;
    return line.str();
}

json trace_json(const Network& net, const TraceStep& s) {
    json j;
    j["type"] = "trace";
    j["rule"] = rule_name(s.rule);
    json ops = json::array();
    for (int id : s.operands) ops.push_back(net.atom(id).name);
    j["operands"] = ops;
    j["target"] = net.atom(s.target).name;
    j["given"] = net.atom(s.given).name;
    j["before"] = {s.before.lo(), s.before.hi()};
    j["after"] = {s.after.lo(), s.after.hi()};
    j["iteration"] = s.iteration;
    return j;
}

const char* status_name(SatStatus s) {
    switch (s) {
    case SatStatus::Saturated: return "saturated";
    case SatStatus::MaxIterations: return "max-iterations";
    case SatStatus::Inconsistent: return "inconsistent";
    }
    return "?";
}

int run_check(const CliConfig& cfg, std::ostream& out) {
    Network net = load_kb(cfg);
    OracleOptions opt{cfg.eps_mass, 12, cfg.force};
    Verdict v = check_consistency(net, opt);
    if (cfg.json_out) {
        json j;
        j["command"] = "check";
        j["status"] = v.consistent ? "consistent" : "inconsistent";
        j["certificate"] = v.certificate;
        j["eps_mass"] = cfg.eps_mass;
        out << j.dump() << "\n";
    } else if (v.consistent) {
        out << "consistent (eps_mass " << cfg.eps_mass << ")\n";
    } else {
        out << "inconsistent (eps_mass " << cfg.eps_mass << ")\n";
        for (const std::string& c : v.certificate) out << "  certificate: " << c << "\n";
    }
    return v.consistent ? kExitOk : kExitInconsistent;
}

int run_saturate(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    Network net = load_kb(cfg);
    SaturationReport rep = saturate(net, cfg.tol, cfg.max_outer);
    if (rep.status == SatStatus::Inconsistent) {
        err << "inconsistent: " << rep.witness << "\n";
        return kExitInconsistent;
    }

    std::ofstream file;
    std::ostream* dst = &out;
    if (!cfg.output_path.empty()) {
        file.open(cfg.output_path);
        if (!file) throw Error("cannot write '" + cfg.output_path + "'");
        dst = &file;
    }

    if (cfg.json_out) {
        if (cfg.trace) {
            for (const TraceStep& s : rep.trace) *dst << trace_json(net, s).dump() << "\n";
        }
        for (const Atom& a : net.atoms()) {
            if (!a.is_base()) continue;
            json j;
            j["type"] = "atom";
            j["name"] = a.name;
            *dst << j.dump() << "\n";
        }
        for (int t = 0; t < net.atom_count(); ++t) {
            for (int g = 0; g < net.atom_count(); ++g) {
                if (t == g) continue;
                const Interval& v = net.at(t, g);
                if (v.is_vacuous()) continue;
                json j;
                j["type"] = "cond";
                j["target"] = net.atom(t).name;
                j["given"] = net.atom(g).name;
                j["lo"] = v.lo();
                j["hi"] = v.hi();
                *dst << j.dump() << "\n";
            }
        }
        json j;
        j["type"] = "report";
        j["command"] = "saturate";
        j["status"] = status_name(rep.status);
        j["iterations"] = rep.iterations;
        j["changed_arcs"] = rep.changed_arcs;
        j["wall_seconds"] = rep.wall_time.count();
        *dst << j.dump() << "\n";
    } else {
        // Trace lines ride along as comments so the output stays a valid KB.
        if (cfg.trace) {
            for (const TraceStep& s : rep.trace) *dst << "# trace: " << trace_line(net, s) << "\n";
        }
        *dst << "# status " << status_name(rep.status) << ", " << rep.iterations
             << " iterations, " << rep.changed_arcs << " arcs changed\n";
        serialize(net, *dst);
    }
    if (rep.status == SatStatus::MaxIterations) {
        err << "warning: iteration cap " << cfg.max_outer << " reached before the fixpoint\n";
    }
    return kExitOk;
}

int run_query(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    Network net = load_kb(cfg);
    SaturationReport rep = saturate(net, cfg.tol, cfg.max_outer);
    if (rep.status == SatStatus::Inconsistent) {
        err << "inconsistent: " << rep.witness << "\n";
        return kExitInconsistent;
    }
    QueryExpr q = parse_query(net, cfg.query_string);
    QueryResult r = query(net, q);
    if (cfg.json_out) {
        if (cfg.trace) {
            for (const TraceStep& s : r.steps) out << trace_json(net, s).dump() << "\n";
        }
        json j;
        j["command"] = "query";
        j["query"] = query_label(net, q);
        j["lo"] = r.bounds.lo();
        j["hi"] = r.bounds.hi();
        out << j.dump() << "\n";
    } else {
        if (cfg.trace) {
            for (const TraceStep& s : r.steps) out << "trace: " << trace_line(net, s) << "\n";
        }
        out << query_label(net, q) << " in " << to_string(r.bounds) << "\n";
    }
    return kExitOk;
}

int run_exact(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    Network net = load_kb(cfg);
    QueryExpr q = parse_query(net, cfg.query_string);
    OracleOptions opt{cfg.eps_mass, 12, cfg.force};
    Interval v;
    try {
        v = exact_bounds(net, q, opt);
    } catch (const Inconsistent& e) {
        err << "inconsistent: " << e.what() << "\n";
        return kExitInconsistent;
    }
    if (cfg.json_out) {
        json j;
        j["command"] = "exact";
        j["query"] = query_label(net, q);
        j["lo"] = v.lo();
        j["hi"] = v.hi();
        j["eps_mass"] = cfg.eps_mass;
        out << j.dump() << "\n";
    } else {
        out << query_label(net, q) << " in " << to_string(v) << " (exact)\n";
    }
    return kExitOk;
}

int run_compare(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    Network net = load_kb(cfg);
    SaturationReport rep = saturate(net, cfg.tol, cfg.max_outer);
    if (rep.status == SatStatus::Inconsistent) {
        err << "inconsistent: " << rep.witness << "\n";
        return kExitInconsistent;
    }
    OracleOptions opt{cfg.eps_mass, 12, cfg.force};

    // Independence declarations only feed the propagation engine; the oracle
    // ignores them, so containment of exact in local is not required there.
    bool has_indeps = !net.indeps().empty();
    if (has_indeps && !cfg.json_out) {
        out << "# note: independence declarations present; the oracle ignores them, so\n"
            << "# note: locally tightened intervals may fall inside the exact ones.\n";
    }

    constexpr double kSlack = 1e-7;
    bool violation = false;
    const int n = net.atom_count();
    for (int t = 0; t < n; ++t) {
        for (int g = 0; g < n; ++g) {
            if (t == g) continue;
            if (!net.atom(t).is_base() || !net.atom(g).is_base()) continue;
            Interval local = net.at(t, g);
            QueryExpr q;
            q.target = QuerySide{QuerySide::Atom, t, -1};
            q.given = QuerySide{QuerySide::Atom, g, -1};
            Interval exact;
            try {
                exact = exact_bounds(net, q, opt);
            } catch (const Inconsistent& e) {
                err << "inconsistent: " << e.what() << "\n";
                return kExitInconsistent;
            }
            double gap = (exact.lo() - local.lo()) + (local.hi() - exact.hi());
            bool sound = exact.lo() >= local.lo() - kSlack && exact.hi() <= local.hi() + kSlack;
            if (cfg.json_out) {
                json j;
                j["command"] = "compare";
                j["target"] = net.atom(t).name;
                j["given"] = net.atom(g).name;
                j["local"] = {local.lo(), local.hi()};
                j["exact"] = {exact.lo(), exact.hi()};
                j["gap"] = gap;
                j["sound"] = sound;
                j["indep_annotated"] = has_indeps;
                out << j.dump() << "\n";
            } else {
                out << net.arc_label(t, g) << " local=" << to_string(local)
                    << " exact=" << to_string(exact) << " gap=" << format_prob(gap);
                if (!sound && !has_indeps) out << "  FAILURE local does not contain exact";
                if (!sound && has_indeps) out << "  (tightened by independence)";
                out << "\n";
            }
            if (!sound && !has_indeps) violation = true;
        }
    }
    return violation ? kExitUnsound : kExitOk;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"interval-probability knowledge base reasoner"};
    app.require_subcommand(1);

    CliConfig cfg;

    auto add_common = [&](CLI::App* sub, bool needs_query) {
        sub->add_option("kb", cfg.kb_path, "knowledge base file")->required();
        if (needs_query) {
            sub->add_option("query", cfg.query_string, "query 'TARGET | GIVEN'")->required();
        }
        sub->add_flag("--json", cfg.json_out, "line-delimited JSON reports");
    };

    CLI::App* check = app.add_subcommand("check", "decide consistency by linear programming");
    add_common(check, false);
    check->add_option("--eps-mass", cfg.eps_mass, "atom mass floor");
    check->add_flag("--force", cfg.force, "lift the 12-base-atom oracle cap");

    CLI::App* sat = app.add_subcommand("saturate", "tighten every interval to the fixpoint");
    add_common(sat, false);
    sat->add_option("-o,--output", cfg.output_path, "write the saturated KB here");
    sat->add_option("--tol", cfg.tol, "minimum tightening that counts as change")
        ->check(CLI::PositiveNumber);
    sat->add_option("--max-outer", cfg.max_outer, "iteration cap");
    sat->add_flag("--trace", cfg.trace, "emit one line per tightening step");

    CLI::App* qry = app.add_subcommand("query", "answer a query with the propagation engine");
    add_common(qry, true);
    qry->add_option("--tol", cfg.tol, "saturation tolerance")->check(CLI::PositiveNumber);
    qry->add_option("--max-outer", cfg.max_outer, "iteration cap");
    qry->add_flag("--trace", cfg.trace, "show the tightenings behind the answer");

    CLI::App* exa = app.add_subcommand("exact", "answer a query with the possible-worlds oracle");
    add_common(exa, true);
    exa->add_option("--eps-mass", cfg.eps_mass, "atom mass floor");
    exa->add_flag("--force", cfg.force, "lift the 12-base-atom oracle cap");

    CLI::App* cmp = app.add_subcommand("compare", "local vs exact bounds over every atom pair");
    add_common(cmp, false);
    cmp->add_option("--eps-mass", cfg.eps_mass, "atom mass floor");
    cmp->add_option("--tol", cfg.tol, "saturation tolerance")->check(CLI::PositiveNumber);
    cmp->add_option("--max-outer", cfg.max_outer, "iteration cap");
    cmp->add_flag("--force", cfg.force, "lift the 12-base-atom oracle cap");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << e.what() << "\n";
        return kExitError;
    }

    try {
        if (check->parsed()) return run_check(cfg, out);
        if (sat->parsed()) return run_saturate(cfg, out, err);
        if (qry->parsed()) return run_query(cfg, out, err);
        if (exa->parsed()) return run_exact(cfg, out, err);
        if (cmp->parsed()) return run_compare(cfg, out, err);
        err << "no command\n";
        return kExitError;
    } catch (const Inconsistent& e) {
        err << "inconsistent: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, out, err);
}

} // namespace credal
