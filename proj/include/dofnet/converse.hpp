#pragma once

#include "dofnet/assignment.hpp"
#include "dofnet/hex_lattice.hpp"
#include "dofnet/oracle.hpp"
#include "dofnet/rational.hpp"
#include "dofnet/topology.hpp"

#include <string>
#include <vector>

namespace dofnet {

// Pair: d_i + d_k <= 1 because T_i = {via} and receiver k hears transmitter via.
// Zero: d_i = 0 because W_i never reaches receiver i (T_i empty or unheard).
struct Constraint {
    enum class Kind { Pair, Zero };
    Kind kind = Kind::Zero;
    int i = 0;
    int k = 0;
    int via = 0;
};

struct Group {
    std::vector<int> nodes;
    Rational bound;
    std::vector<Constraint> constraints;
    std::string annotation;
};

struct GroupCertificate {
    std::vector<Group> groups;
    std::vector<int> uncovered;
    Rational certified_bound;   // sum of group bounds + |uncovered|
};

// Requires max |T_i| <= 1 (PreconditionViolation otherwise).
std::vector<Constraint> lemma_pairwise_bounds(const NetworkTopology& topology,
                                              const MessageAssignment& assignment);
bool constraint_holds(const NetworkTopology& topology, const MessageAssignment& assignment,
                      const Constraint& c);

// max sum d_v over `nodes` subject to the constraints that lie inside `nodes` and 0 <= d <= 1.
Rational packing_bound(const std::vector<int>& nodes, const std::vector<Constraint>& constraints);

GroupCertificate algorithm1_certify(const HexNetwork& net, const MessageAssignment& assignment);
GroupCertificate triangle_state_bound(const HexNetwork& net, const AvoidanceSchedule& schedule);

// Partition, provenance and bound checks. With an assignment, pairwise constraints are
// rechecked and each group bound must equal the packing bound of its constraints.
std::vector<std::string> certificate_violations(const NetworkTopology& topology,
                                                const GroupCertificate& cert,
                                                const MessageAssignment* assignment = nullptr);

struct BackhaulConverseResult {
    int M = 0;
    std::vector<int> S;
    std::vector<int> A_bar;
    int bound = 0;
    Rational slack;   // bound - (4B-1)K/(4B)
};

// Requires integer B >= 1 (Unsupported otherwise) and metrics(assignment).B <= B.
BackhaulConverseResult backhaul_converse(const MessageAssignment& assignment, const Rational& B);

// Support-level peeling: can every transmit signal be recovered from the outputs of
// receivers in A plus the signals of transmitters that carry only messages of A?
bool reconstructibility_check(const NetworkTopology& topology, const MessageAssignment& assignment,
                              const std::vector<int>& A);

}  // namespace dofnet
