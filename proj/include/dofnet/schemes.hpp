#pragma once

#include "dofnet/assignment.hpp"
#include "dofnet/hex_lattice.hpp"
#include "dofnet/rational.hpp"
#include "dofnet/topology.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dofnet {

struct ZfScheme {
    int K = 0;
    std::vector<int> active;                     // sorted message indices
    std::map<int, int> serving;                  // message -> transmitter in T_i
    std::map<int, std::vector<int>> cancel_at;   // message -> ordered C_i
    std::vector<int> deactivated;                // transmitters that never transmit
    Rational declared_pudof;
    Rational declared_backhaul;
    std::string name;

    bool is_active(int i) const;
};

struct GeneratedScheme {
    MessageAssignment assignment;
    ZfScheme scheme;
};

struct DofReport {
    int achieved_dof = 0;
    Rational per_user_dof;
    Rational backhaul;
    std::string scheme_name;
};

// Structural check of every ZfScheme invariant; returns human-readable violations.
std::vector<std::string> scheme_violations(const NetworkTopology& topology,
                                           const MessageAssignment& assignment,
                                           const ZfScheme& scheme);

DofReport dof_report(const ZfScheme& scheme, const MessageAssignment& assignment);

// One block of a linear network with reach L (transmitter j heard at L+1 receivers).
// Messages 1..head get T_i = {i..head}; head+1..head+L are silent; the next `tail`
// messages get T_i = {head+1..i-L}. Transmitter indices are shifted by floor(L/2)
// so that block transmitter u is heard at block receivers u..u+L.
struct LinearBlock {
    int head = 0;
    int tail = 0;
    int L = 1;

    int length() const { return head + L + tail; }
    int active() const { return head + tail; }
    long long backhaul() const {
        return static_cast<long long>(head) * (head + 1) / 2 +
               static_cast<long long>(tail) * (tail + 1) / 2;
    }
    Rational pudof() const { return Rational(active(), length()); }
    Rational load() const { return Rational(backhaul(), length()); }
};

LinearBlock backhaul_block(int B);       // Wyner, 4B users, puDoF (4B-1)/4B at load B
LinearBlock local_block(int M, int L);   // 2M+L users, puDoF 2M/(2M+L)

struct BlockRun {
    LinearBlock block;
    int count = 0;
};

enum class TailPolicy { Reject, Deactivate };

// Blocks laid out left to right over a Wyner (L=1) or locally connected network.
GeneratedScheme convex_combination(const std::vector<BlockRun>& parts, int K = 0,
                                   TailPolicy tail = TailPolicy::Reject);

GeneratedScheme wyner_backhaul_scheme(int K, int B, TailPolicy tail = TailPolicy::Reject);
GeneratedScheme locally_connected_scheme(int K, int L, int M, TailPolicy tail = TailPolicy::Reject);

struct Table1Plan {
    int L = 0;
    std::vector<int> Ms;                  // one or two cooperation orders
    Rational lambda;                      // user fraction on the first scheme
    std::pair<long long, long long> user_ratio;
    std::vector<BlockRun> tile;           // minimal whole-block tiling
    int tile_length = 0;
    Rational pudof;
    Rational backhaul;
};

Table1Plan table1_plan(int L);
GeneratedScheme table1_scheme(int K, int L);

GeneratedScheme two_dim_scheme(int K);

struct RowMetrics {
    int active = 0;
    Rational pudof;
    Rational backhaul;
};
// Messages whose receivers sit in row `row` (0-based) of an n x n grid.
RowMetrics receiver_row_metrics(const GeneratedScheme& g, int n, int row);

GeneratedScheme hexagonal_coset_scheme(const HexNetwork& net);

struct LinearDecomposition {
    std::vector<int> deactivated;
    std::vector<std::vector<int>> chains;
};

std::vector<std::string> decomposition_violations(const NetworkTopology& topology,
                                                  const LinearDecomposition& d);
LinearDecomposition decompose_hexagonal_to_linear(const HexNetwork& net);
GeneratedScheme hexagonal_cooperative_scheme(const HexNetwork& net);

}  // namespace dofnet
