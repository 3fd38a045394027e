#include "dofnet/cli.hpp"

#include "dofnet/errors.hpp"
#include "dofnet/serialize.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace dofnet {

namespace {

struct Options {
    // topology family
    bool wyner = false, local = false, two_dim = false, hex = false, table1 = false;
    int K = 0, L = 0, M = 0, n = 0;
    std::string B;
    // scheme variants
    bool coset = false, cooperative = false, pad = false;
    // verify
    std::optional<std::uint64_t> seed;
    double tol = kDefaultTolerance;
    double floor = kDefaultFloor;
    bool real = false;
    std::string solver = "substitution";
    // oracle / certify
    int node_limit = -1;
    double time_budget = 0;
    bool fixed = false, backhaul = false, algorithm1 = false, triangle = false, lower = false;
    int seeds = 0;
    std::string format = "json";
    std::string input;
};

// Usage problems detected after parsing.
struct UsageError : InvalidParameter {
    using InvalidParameter::InvalidParameter;
};

// Numeric or certificate failure that still produced a document.
struct Outcome {
    Json doc;
    bool ok = true;
};

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv(kSeedEnvVar)) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned integer");
    }
    return 1;
}

Json read_document(const Options& o, std::istream& in) {
    try {
        if (!o.input.empty()) {
            std::ifstream f(o.input);
            if (!f) throw UsageError("cannot open " + o.input);
            return Json::parse(f);
        }
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("input is not valid JSON: ") + e.what());
    }
}

int family_count(const Options& o) {
    return int(o.wyner) + int(o.local) + int(o.two_dim) + int(o.hex) + int(o.table1);
}

void need(bool cond, const std::string& what) {
    if (!cond) throw UsageError(what);
}

int integer_B(const Options& o) {
    need(!o.B.empty(), "--B is required");
    const Rational b = parse_rational(o.B);
    if (b.denominator() != 1 || b.numerator() < 1) throw UsageError("--B must be a positive integer here");
    return static_cast<int>(b.numerator());
}

// Topology from flags; nullopt when no family flag is given.
std::optional<ParsedTopology> topology_from_flags(const Options& o) {
    if (family_count(o) == 0) return std::nullopt;
    need(family_count(o) == 1, "choose one of --wyner, --local, --two-dim, --hex");
    if (o.wyner) {
        need(o.K > 0, "--K is required");
        return ParsedTopology{build_wyner(o.K), std::nullopt};
    }
    if (o.local) {
        need(o.K > 0 && o.L > 0, "--K and --L are required");
        return ParsedTopology{build_locally_connected(o.K, o.L), std::nullopt};
    }
    if (o.two_dim) {
        need(o.K > 0, "--K is required");
        return ParsedTopology{build_two_dim(o.K), std::nullopt};
    }
    if (o.hex) {
        need(o.n > 0, "--n is required");
        HexNetwork net = build_hexagonal(o.n);
        return ParsedTopology{net.topology, net.lattice};
    }
    throw UsageError("--table1 does not describe a topology");
}

Json topology_json(const ParsedTopology& t) {
    if (t.lattice) return to_json(HexNetwork{*t.lattice, t.topology});
    return to_json(t.topology);
}

// Accepts a bundle {topology, assignment?, scheme?, schedule?} or a bare topology.
struct Bundle {
    ParsedTopology topology;
    std::optional<MessageAssignment> assignment;
    std::optional<ZfScheme> scheme;
    std::optional<AvoidanceSchedule> schedule;
};

Bundle parse_bundle(const Json& doc) {
    if (!doc.is_object()) throw UsageError("input must be a JSON object");
    if (!doc.contains("topology")) return Bundle{topology_from_json(doc), {}, {}, {}};
    Bundle b{topology_from_json(doc.at("topology")), {}, {}, {}};
    if (doc.contains("assignment")) b.assignment = assignment_from_json(doc.at("assignment"));
    if (doc.contains("scheme")) b.scheme = scheme_from_json(doc.at("scheme"));
    if (doc.contains("schedule")) b.schedule = schedule_from_json(doc.at("schedule"));
    const int K = b.topology.topology.K();
    if (b.assignment && b.assignment->K() != K) throw UsageError("assignment K does not match topology");
    if (b.scheme && b.scheme->K != K) throw UsageError("scheme K does not match topology");
    return b;
}

Json bundle_json(const ParsedTopology& t, const GeneratedScheme& g) {
    return Json{{"topology", topology_json(t)},
                {"assignment", to_json(g.assignment)},
                {"scheme", to_json(g.scheme)},
                {"metrics", to_json(metrics(g.assignment))},
                {"report", to_json(dof_report(g.scheme, g.assignment))}};
}

// ---- subcommands ----

Outcome cmd_topology(const Options& o) {
    auto t = topology_from_flags(o);
    need(t.has_value(), "choose one of --wyner, --local, --two-dim, --hex");
    return {topology_json(*t)};
}

Outcome cmd_scheme(const Options& o) {
    need(family_count(o) == 1, "choose one of --wyner, --local, --table1, --two-dim, --hex");
    const TailPolicy tail = o.pad ? TailPolicy::Deactivate : TailPolicy::Reject;
    if (o.wyner) {
        need(o.K > 0, "--K is required");
        return {bundle_json({build_wyner(o.K), std::nullopt}, wyner_backhaul_scheme(o.K, integer_B(o), tail))};
    }
    if (o.local) {
        need(o.K > 0 && o.L > 0 && o.M > 0, "--K, --L and --M are required");
        return {bundle_json({build_locally_connected(o.K, o.L), std::nullopt},
                            locally_connected_scheme(o.K, o.L, o.M, tail))};
    }
    if (o.table1) {
        need(o.L > 0, "--L is required");
        const int K = o.K > 0 ? o.K : table1_plan(o.L).tile_length;
        return {bundle_json({build_locally_connected(K, o.L), std::nullopt}, table1_scheme(K, o.L))};
    }
    if (o.two_dim) {
        need(o.K > 0, "--K is required");
        return {bundle_json({build_two_dim(o.K), std::nullopt}, two_dim_scheme(o.K))};
    }
    need(o.n > 0, "--n is required");
    need(!(o.coset && o.cooperative), "--coset and --cooperative are exclusive");
    HexNetwork net = build_hexagonal(o.n);
    GeneratedScheme g = o.coset ? hexagonal_coset_scheme(net) : hexagonal_cooperative_scheme(net);
    return {bundle_json({net.topology, net.lattice}, g)};
}

BeamSolver parse_solver(const std::string& s) {
    if (s == "substitution") return BeamSolver::Substitution;
    if (s == "dense") return BeamSolver::Dense;
    throw UsageError("--solver must be substitution or dense");
}

Outcome cmd_verify(const Options& o, std::istream& in) {
    Bundle b = parse_bundle(read_document(o, in));
    need(b.assignment && b.scheme, "verify needs a bundle with assignment and scheme");
    const NetworkTopology& topo = b.topology.topology;
    const std::uint64_t seed = resolve_seed(o);
    const auto structural = scheme_violations(topo, *b.assignment, *b.scheme);
    Json doc;
    if (!structural.empty()) {
        doc = Json{{"pass", false}, {"dof", 0}, {"pudof", "0"}, {"max_residual", nullptr},
                   {"seed", seed}, {"structural_violations", structural}, {"per_receiver", Json::array()}};
        return {doc, false};
    }
    const ChannelRealization ch = sample_channels(topo, seed, o.real);
    const BeamDesign beams = design_beams(topo, ch, *b.assignment, *b.scheme, parse_solver(o.solver));
    const VerificationReport r = verify(topo, ch, *b.scheme, beams, o.tol, o.floor);
    Json rep = to_json(r);
    doc = Json{{"pass", r.pass},
               {"dof", r.dof},
               {"pudof", to_string(Rational(r.dof, topo.K()))},
               {"max_residual", r.max_residual},
               {"seed", seed},
               {"structural_violations", Json::array()},
               {"per_receiver", rep.at("per_receiver")}};
    return {doc, r.pass};
}

Outcome cmd_oracle(const Options& o, std::istream& in) {
    std::optional<Bundle> b;
    if (auto t = topology_from_flags(o)) b = Bundle{*t, {}, {}, {}};
    else b = parse_bundle(read_document(o, in));
    const NetworkTopology& topo = b->topology.topology;
    need(!(o.cooperative && o.fixed), "--cooperative and --fixed are exclusive");

    Json doc;
    int value = 0;
    std::optional<int> scheme_value;
    if (o.cooperative) {
        need(!o.B.empty(), "--B is required with --cooperative");
        const Rational B = parse_rational(o.B);
        const int limit = o.node_limit > 0 ? o.node_limit : kDefaultCooperativeNodeLimit;
        CooperativeResult r = max_avoidance_cooperative(topo, B, limit, o.time_budget);
        value = r.value;
        doc = to_json(r);
        if (b->scheme && b->assignment && metrics(*b->assignment).B <= B)
            scheme_value = static_cast<int>(b->scheme->active.size());
    } else if (o.fixed) {
        need(b->assignment.has_value(), "--fixed needs an assignment on stdin");
        const int limit = o.node_limit > 0 ? o.node_limit : kDefaultFixedAssignmentNodeLimit;
        CooperativeResult r = max_zf_with_assignment(topo, *b->assignment, limit, o.time_budget);
        value = r.value;
        doc = to_json(r);
        if (b->scheme) scheme_value = static_cast<int>(b->scheme->active.size());
    } else {
        const int limit = o.node_limit > 0 ? o.node_limit : kDefaultM1NodeLimit;
        OracleResult r = max_avoidance_m1(topo, limit, o.time_budget);
        value = r.value;
        doc = to_json(r);
        if (b->scheme && b->assignment && b->assignment->max_size() <= 1)
            scheme_value = static_cast<int>(b->scheme->active.size());
    }
    bool ok = true;
    if (scheme_value) {
        doc["scheme_value"] = *scheme_value;
        ok = value >= *scheme_value;
        doc["consistent"] = ok;
    }
    return {doc, ok};
}

Outcome cmd_certify(const Options& o, std::istream& in) {
    const int modes = int(o.backhaul) + int(o.algorithm1) + int(o.triangle) + int(o.lower);
    need(modes == 1, "choose one of --backhaul, --algorithm1, --triangle, --lower");
    Bundle b = parse_bundle(read_document(o, in));
    const NetworkTopology& topo = b.topology.topology;
    const std::optional<int> scheme_value =
        b.scheme ? std::optional<int>(static_cast<int>(b.scheme->active.size())) : std::nullopt;

    if (o.backhaul) {
        need(b.assignment.has_value(), "--backhaul needs an assignment");
        need(!o.B.empty(), "--B is required with --backhaul");
        const BackhaulConverseResult r = backhaul_converse(*b.assignment, parse_rational(o.B));
        std::vector<int> A;
        for (int i = 1; i <= topo.K(); ++i)
            if (!std::binary_search(r.A_bar.begin(), r.A_bar.end(), i)) A.push_back(i);
        const bool rec = reconstructibility_check(topo, *b.assignment, A);
        Json doc = to_json(r);
        doc["reconstructible"] = rec;
        bool ok = rec;
        if (scheme_value) {
            doc["scheme_value"] = *scheme_value;
            ok = ok && r.bound >= *scheme_value;
        }
        doc["consistent"] = ok;
        return {doc, ok};
    }

    if (o.algorithm1 || o.triangle) {
        need(b.topology.lattice.has_value(), "certificate needs a hexagonal topology with coords");
        const HexNetwork net{*b.topology.lattice, topo};
        GroupCertificate cert;
        std::vector<std::string> violations;
        std::optional<int> achieved = scheme_value;
        if (o.algorithm1) {
            need(b.assignment.has_value(), "--algorithm1 needs an assignment");
            cert = algorithm1_certify(net, *b.assignment);
            violations = certificate_violations(topo, cert, &*b.assignment);
            if (b.assignment->max_size() > 1) achieved.reset();
        } else {
            AvoidanceSchedule sched;
            if (b.schedule) sched = *b.schedule;
            else if (b.scheme) sched = schedule_from_scheme(*b.scheme);
            else throw UsageError("--triangle needs a schedule or a scheme");
            const auto bad = schedule_violations(topo, sched);
            if (!bad.empty()) violations.insert(violations.end(), bad.begin(), bad.end());
            cert = triangle_state_bound(net, sched);
            const auto cv = certificate_violations(topo, cert);
            violations.insert(violations.end(), cv.begin(), cv.end());
            achieved = sched.value();
        }
        Json doc = to_json(cert);
        doc["violations"] = violations;
        bool ok = violations.empty();
        if (achieved) {
            doc["scheme_value"] = *achieved;
            ok = ok && Rational(*achieved) <= cert.certified_bound;
        }
        doc["consistent"] = ok;
        return {doc, ok};
    }

    need(b.assignment && b.scheme, "--lower needs a bundle with assignment and scheme");
    const int limit = o.node_limit > 0 ? o.node_limit : kDefaultM1NodeLimit;
    const LowerBoundCheck chk = certify_lower_bound(topo, *b.assignment, *b.scheme, limit);
    Json doc{{"structural_ok", chk.structural_ok},
             {"oracle_value", chk.oracle_value ? Json(*chk.oracle_value) : Json(nullptr)},
             {"scheme_value", chk.scheme_value},
             {"ok", chk.ok()}};
    return {doc, chk.ok()};
}

// Target puDoF of the load-one rows, one per L = 2..6.
const std::map<int, Rational> kLoadOneTargets = {
    {2, Rational(2, 3)}, {3, Rational(3, 5)}, {4, Rational(5, 9)}, {5, Rational(11, 21)}, {6, Rational(1, 2)}};

struct TableRow {
    Table1Plan plan;
    Rational generated_pudof;
    Rational generated_backhaul;
    bool exact = false;
    int verified_seeds = 0;
    bool numeric_ok = true;
};

TableRow build_row(int L, int seeds, double tol, double floor, std::uint64_t seed0) {
    TableRow row;
    row.plan = table1_plan(L);
    const int K = row.plan.tile_length;
    const GeneratedScheme g = table1_scheme(K, L);
    const NetworkTopology topo = build_locally_connected(K, L);
    const DofReport rep = dof_report(g.scheme, g.assignment);
    row.generated_pudof = rep.per_user_dof;
    row.generated_backhaul = metrics(g.assignment).B;
    row.exact = scheme_violations(topo, g.assignment, g.scheme).empty() &&
                row.generated_pudof == row.plan.pudof && row.generated_backhaul == row.plan.backhaul &&
                row.plan.pudof == kLoadOneTargets.at(L) && row.plan.backhaul <= 1;
    for (int s = 0; s < seeds; ++s) {
        const ChannelRealization ch = sample_channels(topo, seed0 + static_cast<std::uint64_t>(s));
        const BeamDesign beams = design_beams(topo, ch, g.assignment, g.scheme);
        const VerificationReport r = verify(topo, ch, g.scheme, beams, tol, floor);
        if (r.pass) ++row.verified_seeds;
        else row.numeric_ok = false;
    }
    return row;
}

Json row_json(const TableRow& row, bool with_checks) {
    Json j = to_json(row.plan);
    if (with_checks) {
        j["target"] = to_string(kLoadOneTargets.at(row.plan.L));
        j["exact"] = row.exact;
        j["verified_seeds"] = row.verified_seeds;
    }
    return j;
}

std::string ratio_of(const Json& j) { return j.at("ratio").get<std::string>(); }

std::string m_list(const Json& j) {
    std::string s;
    for (const auto& m : j.at("M")) s += (s.empty() ? "" : "+") + std::to_string(m.get<int>());
    return s;
}

void emit_table(const std::vector<Json>& rows, const std::string& format, std::ostream& out) {
    if (format == "csv") {
        out << "L,M,ratio,pudof,backhaul,tile_length\n";
        for (const auto& r : rows)
            out << r.at("L").get<int>() << ',' << m_list(r) << ',' << ratio_of(r) << ','
                << r.at("pudof").get<std::string>() << ',' << r.at("backhaul").get<std::string>() << ','
                << r.at("tile_length").get<int>() << '\n';
        return;
    }
    out << std::left << std::setw(4) << "L" << std::setw(8) << "M" << std::setw(8) << "ratio" << std::setw(8)
        << "puDoF" << std::setw(10) << "backhaul" << "tile\n";
    for (const auto& r : rows)
        out << std::setw(4) << r.at("L").get<int>() << std::setw(8) << m_list(r) << std::setw(8) << ratio_of(r)
            << std::setw(8) << r.at("pudof").get<std::string>() << std::setw(10)
            << r.at("backhaul").get<std::string>() << r.at("tile_length").get<int>() << '\n';
}

int cmd_table(const Options& o, bool all, std::ostream& out) {
    std::vector<int> Ls;
    if (all) Ls = {2, 3, 4, 5, 6};
    else {
        need(o.L > 0, "--L is required");
        Ls = {o.L};
    }
    const std::uint64_t seed0 = resolve_seed(o);
    std::vector<Json> rows;
    bool ok = true;
    for (int L : Ls) {
        const TableRow row = build_row(L, o.seeds, o.tol, o.floor, seed0);
        ok = ok && row.exact && row.numeric_ok;
        rows.push_back(row_json(row, all || o.seeds > 0));
    }
    if (o.format == "json") {
        if (all) out << Json{{"rows", rows}, {"ok", ok}}.dump(2) << '\n';
        else out << rows.front().dump(2) << '\n';
    } else {
        emit_table(rows, o.format, out);
    }
    return ok ? kExitOk : kExitFailure;
}

void add_family(CLI::App* sub, Options& o, bool with_table1) {
    sub->add_flag("--wyner", o.wyner, "Wyner linear network");
    sub->add_flag("--local", o.local, "locally connected network (needs --L)");
    sub->add_flag("--two-dim", o.two_dim, "two-dimensional grid (K a perfect square)");
    sub->add_flag("--hex", o.hex, "hexagonal sectored network (needs --n)");
    if (with_table1) sub->add_flag("--table1", o.table1, "load-one block mix for L = 2..6 (needs --L)");
    sub->add_option("--K", o.K, "number of users");
    sub->add_option("--L", o.L, "connectivity parameter");
    sub->add_option("--n", o.n, "hexagonal side");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Cooperative zero-forcing DoF toolkit"};
    app.require_subcommand(1);

    auto* topology = app.add_subcommand("topology", "emit a topology document");
    add_family(topology, o, false);

    auto* scheme = app.add_subcommand("scheme", "generate assignment and zero-forcing scheme");
    add_family(scheme, o, true);
    scheme->add_option("--B", o.B, "backhaul load (integer for --wyner)");
    scheme->add_option("--M", o.M, "cooperation order for --local");
    scheme->add_flag("--coset", o.coset, "hexagonal single-coset scheme");
    scheme->add_flag("--cooperative", o.cooperative, "hexagonal chain scheme (default)");
    scheme->add_flag("--pad", o.pad, "deactivate trailing users that do not fill a block");

    auto* verify_cmd = app.add_subcommand("verify", "numerically verify a bundle read from stdin");
    auto* oracle = app.add_subcommand("oracle", "exact interference-avoidance optimum");
    add_family(oracle, o, false);
    oracle->add_flag("--cooperative", o.cooperative, "optimize over assignments with load --B");
    oracle->add_flag("--fixed", o.fixed, "optimize active set for the assignment on stdin");
    oracle->add_option("--B", o.B, "backhaul load, p/q accepted");

    auto* certify = app.add_subcommand("certify", "converse certificates");
    certify->add_flag("--backhaul", o.backhaul, "backhaul-load converse (needs --B)");
    certify->add_flag("--algorithm1", o.algorithm1, "hexagonal M=1 group certificate");
    certify->add_flag("--triangle", o.triangle, "hexagonal interference-avoidance certificate");
    certify->add_flag("--lower", o.lower, "check the scheme against the oracle");
    certify->add_option("--B", o.B, "backhaul load");

    auto* table1 = app.add_subcommand("table1", "one load-one locally connected row");
    table1->add_option("--L", o.L, "connectivity parameter, 2..6")->required();
    auto* report = app.add_subcommand("report", "regenerate and check the rows L = 2..6");

    for (auto* sub : {verify_cmd, oracle, certify, table1, report}) {
        sub->add_option("--seed", o.seed, "channel seed (default $" + std::string(kSeedEnvVar) + " or 1)");
        sub->add_option("--tol", o.tol, "relative interference tolerance");
        sub->add_option("--floor", o.floor, "desired-signal floor");
    }
    for (auto* sub : {table1, report}) {
        sub->add_option("--format", o.format, "json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--seeds", o.seeds, "numeric verification seeds per row")->check(CLI::NonNegativeNumber);
    }
    verify_cmd->add_flag("--real", o.real, "real-valued channels");
    verify_cmd->add_option("--solver", o.solver, "substitution or dense");
    for (auto* sub : {oracle, certify}) {
        sub->add_option("--node-limit", o.node_limit, "resource guard on K");
        sub->add_option("--time-budget", o.time_budget, "seconds, 0 for none");
    }
    for (auto* sub : {verify_cmd, oracle, certify}) sub->add_option("--input", o.input, "read JSON from file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        Outcome r;
        if (*topology) r = cmd_topology(o);
        else if (*scheme) r = cmd_scheme(o);
        else if (*verify_cmd) r = cmd_verify(o, in);
        else if (*oracle) r = cmd_oracle(o, in);
        else if (*certify) r = cmd_certify(o, in);
        else if (*table1) return cmd_table(o, false, out);
        else return cmd_table(o, true, out);
        out << r.doc.dump(2) << '\n';
        return r.ok ? kExitOk : kExitFailure;
    } catch (const ResourceGuard& e) {
        err << "resource guard: " << e.what() << '\n';
        return kExitResource;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionViolation& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Unsupported& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace dofnet
