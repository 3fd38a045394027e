#include "dofnet/serialize.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>

namespace dofnet {

namespace {

std::vector<int> int_list(const Json& j) {
    if (!j.is_array()) throw InvalidParameter("expected an array of integers");
    return j.get<std::vector<int>>();
}

}  // namespace

Json to_json(const NetworkTopology& topology) {
    Json j;
    j["kind"] = kind_name(topology.kind());
    j["K"] = topology.K();
    Json params = Json::object();
    if (topology.kind() == TopologyKind::LocallyConnected || topology.kind() == TopologyKind::Wyner)
        params["L"] = topology.param();
    else if (topology.kind() == TopologyKind::TwoDim || topology.kind() == TopologyKind::Hexagonal)
        params["n"] = topology.param();
    j["params"] = params;
    Json hears = Json::array();
    for (int rx = 1; rx <= topology.K(); ++rx) hears.push_back(topology.hears(rx));
    j["hears"] = hears;
    return j;
}

Json to_json(const HexNetwork& net) {
    Json j = to_json(net.topology);
    j["n"] = net.lattice.n();
    Json coords = Json::array(), cosets = Json::array();
    for (int v = 1; v <= net.lattice.size(); ++v) {
        coords.push_back({net.lattice.coords(v).a, net.lattice.coords(v).b});
        cosets.push_back(coset_name(net.lattice.coset(v)));
    }
    j["coords"] = coords;
    j["cosets"] = cosets;
    return j;
}

Json to_json(const MessageAssignment& assignment) {
    Json sets = Json::array();
    for (int i = 1; i <= assignment.K(); ++i) sets.push_back(assignment.transmit_set(i));
    return Json{{"K", assignment.K()}, {"transmit_sets", sets}};
}

Json to_json(const CooperationMetrics& m) {
    Json hist = Json::object();
    for (auto [size, frac] : m.histogram) hist[std::to_string(size)] = to_string(frac);
    return Json{{"M", m.M}, {"B", to_string(m.B)}, {"histogram", hist}};
}

Json to_json(const ZfScheme& scheme) {
    Json serving = Json::object(), cancel = Json::object();
    for (int i : scheme.active) {
        serving[std::to_string(i)] = scheme.serving.at(i);
        auto c = scheme.cancel_at.find(i);
        cancel[std::to_string(i)] = c == scheme.cancel_at.end() ? std::vector<int>{} : c->second;
    }
    return Json{{"K", scheme.K},
                {"name", scheme.name},
                {"active", scheme.active},
                {"serving", serving},
                {"cancel_at", cancel},
                {"deactivated", scheme.deactivated},
                {"declared",
                 {{"pudof", to_string(scheme.declared_pudof)}, {"backhaul", to_string(scheme.declared_backhaul)}}}};
}

Json to_json(const DofReport& r) {
    return Json{{"scheme", r.scheme_name},
                {"dof", r.achieved_dof},
                {"pudof", to_string(r.per_user_dof)},
                {"backhaul", to_string(r.backhaul)}};
}

Json to_json(const VerificationReport& report) {
    Json per = Json::array();
    for (const auto& c : report.per_receiver)
        per.push_back({{"rx", c.rx}, {"desired_mag", c.desired_mag}, {"max_interf", c.max_interf}});
    return Json{{"pass", report.pass},
                {"dof", report.dof},
                {"max_residual", report.max_residual},
                {"per_receiver", per}};
}

Json to_json(const AvoidanceSchedule& schedule) {
    Json pairs = Json::array();
    for (auto [r, t] : schedule.pairs) pairs.push_back({r, t});
    return Json{{"value", schedule.value()}, {"pairs", pairs}};
}

Json to_json(const OracleResult& result) {
    return Json{{"value", result.value},
                {"witness", to_json(result.witness)},
                {"nodes_explored", result.nodes_explored}};
}

Json to_json(const CooperativeResult& result) {
    return Json{{"value", result.value},
                {"witness", {{"active", result.active}, {"assignment", to_json(result.assignment)}}},
                {"nodes_explored", result.nodes_explored}};
}

Json to_json(const GroupCertificate& cert) {
    Json groups = Json::array();
    for (const auto& g : cert.groups) {
        Json cons = Json::array();
        for (const auto& c : g.constraints) {
            if (c.kind == Constraint::Kind::Zero) cons.push_back({{"type", "zero"}, {"i", c.i}});
            else cons.push_back({{"type", "pair"}, {"i", c.i}, {"k", c.k}, {"via", c.via}});
        }
        groups.push_back({{"nodes", g.nodes},
                          {"bound", to_string(g.bound)},
                          {"annotation", g.annotation},
                          {"constraints", cons}});
    }
    return Json{{"groups", groups},
                {"uncovered", cert.uncovered},
                {"certified_bound", to_string(cert.certified_bound)}};
}

Json to_json(const BackhaulConverseResult& r) {
    return Json{{"M", r.M},
                {"S", r.S},
                {"A_bar", r.A_bar},
                {"A_bar_size", r.A_bar.size()},
                {"bound", r.bound},
                {"slack", to_string(r.slack)}};
}

Json to_json(const Table1Plan& plan) {
    Json tile = Json::array();
    for (const auto& run : plan.tile)
        tile.push_back({{"M", run.block.head}, {"block", run.block.length()}, {"count", run.count}});
    std::string ratio = plan.Ms.size() == 1
                            ? std::string("-")
                            : std::to_string(plan.user_ratio.first) + ":" + std::to_string(plan.user_ratio.second);
    return Json{{"L", plan.L},
                {"M", plan.Ms},
                {"ratio", ratio},
                {"pudof", to_string(plan.pudof)},
                {"backhaul", to_string(plan.backhaul)},
                {"tile_length", plan.tile_length},
                {"tile", tile}};
}

Json to_json(const LinearDecomposition& d) {
    return Json{{"deactivated", d.deactivated}, {"chains", d.chains}};
}

ParsedTopology topology_from_json(const Json& j) {
    try {
        const TopologyKind kind = parse_kind(j.at("kind").get<std::string>());
        const int K = j.at("K").get<int>();
        std::vector<std::vector<int>> hears;
        for (const auto& row : j.at("hears")) hears.push_back(int_list(row));
        int param = 0;
        if (j.contains("params")) {
            const auto& p = j.at("params");
            if (p.contains("L")) param = p.at("L").get<int>();
            if (p.contains("n")) param = p.at("n").get<int>();
        }
        if (kind == TopologyKind::Hexagonal && j.contains("coords")) {
            std::vector<Eisenstein> nodes;
            for (const auto& c : j.at("coords")) nodes.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
            HexNetwork net = build_hexagonal_from(std::move(nodes), j.value("n", 0));
            NetworkTopology given(kind, K, std::move(hears), param);
            for (int rx = 1; rx <= K; ++rx)
                if (given.hears(rx) != net.topology.hears(rx))
                    throw InvalidParameter("hears does not match the lattice coordinates");
            return ParsedTopology{net.topology, net.lattice};
        }
        return ParsedTopology{NetworkTopology(kind, K, std::move(hears), param), std::nullopt};
    } catch (const Json::exception& e) {
        throw InvalidParameter(std::string("malformed topology document: ") + e.what());
    }
}

MessageAssignment assignment_from_json(const Json& j) {
    try {
        std::vector<std::vector<int>> sets;
        for (const auto& row : j.at("transmit_sets")) sets.push_back(int_list(row));
        return MessageAssignment(j.at("K").get<int>(), std::move(sets));
    } catch (const Json::exception& e) {
        throw InvalidParameter(std::string("malformed assignment document: ") + e.what());
    }
}

ZfScheme scheme_from_json(const Json& j) {
    try {
        ZfScheme s;
        s.K = j.at("K").get<int>();
        s.name = j.value("name", std::string());
        s.active = int_list(j.at("active"));
        std::sort(s.active.begin(), s.active.end());
        for (const auto& [key, val] : j.at("serving").items()) s.serving[std::stoi(key)] = val.get<int>();
        for (const auto& [key, val] : j.at("cancel_at").items()) s.cancel_at[std::stoi(key)] = int_list(val);
        s.deactivated = int_list(j.at("deactivated"));
        if (j.contains("declared")) {
            s.declared_pudof = parse_rational(j.at("declared").at("pudof").get<std::string>());
            s.declared_backhaul = parse_rational(j.at("declared").at("backhaul").get<std::string>());
        }
        return s;
    } catch (const Json::exception& e) {
        throw InvalidParameter(std::string("malformed scheme document: ") + e.what());
    }
}

AvoidanceSchedule schedule_from_json(const Json& j) {
    try {
        AvoidanceSchedule s;
        for (const auto& p : j.at("pairs")) s.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        std::sort(s.pairs.begin(), s.pairs.end());
        return s;
    } catch (const Json::exception& e) {
        throw InvalidParameter(std::string("malformed schedule document: ") + e.what());
    }
}

}  // namespace dofnet
