#pragma once

#include "dofnet/assignment.hpp"
#include "dofnet/rational.hpp"
#include "dofnet/schemes.hpp"
#include "dofnet/topology.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dofnet {

// Single-transmitter interference avoidance: receiver r served by transmitter t.
struct AvoidanceSchedule {
    std::vector<std::pair<int, int>> pairs;   // (receiver, transmitter), sorted by receiver
    int value() const { return static_cast<int>(pairs.size()); }
};

std::vector<std::string> schedule_violations(const NetworkTopology& topology,
                                             const AvoidanceSchedule& schedule);
// Active set and serving transmitters of an M=1 scheme.
AvoidanceSchedule schedule_from_scheme(const ZfScheme& scheme);

struct OracleResult {
    int value = 0;
    AvoidanceSchedule witness;
    long long nodes_explored = 0;
};

struct CooperativeResult {
    int value = 0;
    MessageAssignment assignment;
    std::vector<int> active;
    long long nodes_explored = 0;
};

inline constexpr int kDefaultM1NodeLimit = 36;
inline constexpr int kDefaultCooperativeNodeLimit = 12;
inline constexpr int kDefaultFixedAssignmentNodeLimit = 32;

// Exact optimum; throws ResourceGuard when K > node_limit or the time budget
// (seconds, 0 = none) runs out.
OracleResult max_avoidance_m1(const NetworkTopology& topology, int node_limit = kDefaultM1NodeLimit,
                              double time_budget_s = 0);

// Generic zero-forcing feasibility of activating `active` under `assignment`:
// every active message can be nulled at all other active receivers that hear its
// transmit set while still reaching its own receiver.
bool zf_set_feasible(const NetworkTopology& topology, const MessageAssignment& assignment,
                     const std::vector<int>& active);

// Largest ZF-feasible active set for a fixed assignment.
CooperativeResult max_zf_with_assignment(const NetworkTopology& topology,
                                         const MessageAssignment& assignment,
                                         int node_limit = kDefaultFixedAssignmentNodeLimit,
                                         double time_budget_s = 0);

// Largest active set over all assignments with sum |T_i| <= B*K.
CooperativeResult max_avoidance_cooperative(const NetworkTopology& topology, const Rational& B,
                                            int node_limit = kDefaultCooperativeNodeLimit,
                                            double time_budget_s = 0);

struct LowerBoundCheck {
    bool structural_ok = false;
    std::optional<int> oracle_value;   // empty when the instance exceeds the node limit
    int scheme_value = 0;
    bool ok() const { return structural_ok && (!oracle_value || *oracle_value >= scheme_value); }
};

LowerBoundCheck certify_lower_bound(const NetworkTopology& topology, const MessageAssignment& assignment,
                                    const ZfScheme& scheme, int node_limit = kDefaultM1NodeLimit);

}  // namespace dofnet
