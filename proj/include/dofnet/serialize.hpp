#pragma once

#include "dofnet/assignment.hpp"
#include "dofnet/converse.hpp"
#include "dofnet/hex_lattice.hpp"
#include "dofnet/oracle.hpp"
#include "dofnet/schemes.hpp"
#include "dofnet/topology.hpp"
#include "dofnet/zf_engine.hpp"

#include "json.hpp"

#include <optional>

namespace dofnet {

using Json = nlohmann::ordered_json;

Json to_json(const NetworkTopology& topology);
Json to_json(const HexNetwork& net);
Json to_json(const MessageAssignment& assignment);
Json to_json(const CooperationMetrics& m);
Json to_json(const ZfScheme& scheme);
Json to_json(const DofReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const AvoidanceSchedule& schedule);
Json to_json(const OracleResult& result);
Json to_json(const CooperativeResult& result);
Json to_json(const GroupCertificate& cert);
Json to_json(const BackhaulConverseResult& result);
Json to_json(const Table1Plan& plan);
Json to_json(const LinearDecomposition& d);

// Parsed topology; hexagonal documents also rebuild the lattice.
struct ParsedTopology {
    NetworkTopology topology;
    std::optional<HexLattice> lattice;
};

ParsedTopology topology_from_json(const Json& j);
MessageAssignment assignment_from_json(const Json& j);
ZfScheme scheme_from_json(const Json& j);
AvoidanceSchedule schedule_from_json(const Json& j);

}  // namespace dofnet
