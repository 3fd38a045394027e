#include "dofnet/schemes.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

namespace dofnet {

bool ZfScheme::is_active(int i) const {
    return std::binary_search(active.begin(), active.end(), i);
}

std::vector<std::string> scheme_violations(const NetworkTopology& topology,
                                           const MessageAssignment& assignment,
                                           const ZfScheme& scheme) {
    std::vector<std::string> bad;
    const int K = topology.K();
    if (scheme.K != K || assignment.K() != K) {
        bad.push_back("K mismatch between topology, assignment and scheme");
        return bad;
    }
    std::vector<char> on(K + 1, 0);
    for (int i : scheme.active) {
        if (i < 1 || i > K) {
            bad.push_back("active message " + std::to_string(i) + " outside [K]");
            continue;
        }
        if (on[i]) bad.push_back("message " + std::to_string(i) + " listed twice");
        on[i] = 1;
    }
    if (!bad.empty()) return bad;

    std::vector<char> used(K + 1, 0);
    for (int i : scheme.active) {
        const std::string tag = "message " + std::to_string(i) + ": ";
        const auto& T = assignment.transmit_set(i);
        auto s = scheme.serving.find(i);
        if (s == scheme.serving.end()) {
            bad.push_back(tag + "no serving transmitter");
            continue;
        }
        if (!std::binary_search(T.begin(), T.end(), s->second))
            bad.push_back(tag + "serving transmitter not in T_i");
        else if (!topology.hears(i, s->second))
            bad.push_back(tag + "serving transmitter not heard by its receiver");
        static const std::vector<int> none;
        auto c = scheme.cancel_at.find(i);
        const auto& C = c == scheme.cancel_at.end() ? none : c->second;
        if (C.size() + 1 > T.size()) bad.push_back(tag + "|C_i| exceeds |T_i| - 1");

        std::set<int> reach;
        for (int t : T) {
            used[t] = 1;
            for (int k : topology.heard_at(t)) reach.insert(k);
        }
        std::set<int> cset;
        for (int k : C) {
            if (k == i) bad.push_back(tag + "C_i contains the message's own receiver");
            if (!reach.count(k))
                bad.push_back(tag + "receiver " + std::to_string(k) + " in C_i hears no transmitter of T_i");
            if (!cset.insert(k).second) bad.push_back(tag + "duplicate entry in C_i");
        }
        for (int k : reach)
            if (k != i && on[k] && !cset.count(k))
                bad.push_back(tag + "active receiver " + std::to_string(k) + " hears T_i but is not in C_i");
    }
    for (int t : scheme.deactivated) {
        if (t < 1 || t > K) bad.push_back("deactivated transmitter outside [K]");
        else if (used[t]) bad.push_back("deactivated transmitter " + std::to_string(t) + " carries an active message");
    }
    if (scheme.declared_pudof != Rational(static_cast<long long>(scheme.active.size()), K))
        bad.push_back("declared puDoF " + to_string(scheme.declared_pudof) + " differs from |active|/K");
    if (scheme.declared_backhaul != metrics(assignment).B)
        bad.push_back("declared backhaul " + to_string(scheme.declared_backhaul) + " differs from the assignment's load");
    return bad;
}

DofReport dof_report(const ZfScheme& scheme, const MessageAssignment& assignment) {
    DofReport r;
    r.achieved_dof = static_cast<int>(scheme.active.size());
    r.scheme_name = scheme.name;
    if (scheme.K > 0) {
        r.per_user_dof = Rational(r.achieved_dof, scheme.K);
        r.backhaul = metrics(assignment).B;
    }
    return r;
}

LinearBlock backhaul_block(int B) {
    if (B < 1) throw InvalidParameter("B must be a positive integer");
    return LinearBlock{2 * B, 2 * B - 1, 1};
}

LinearBlock local_block(int M, int L) {
    if (M < 1) throw InvalidParameter("M must be positive");
    if (L < 1) throw InvalidParameter("L must be positive");
    return LinearBlock{M, M, L};
}

namespace {

// Scheme on chain positions 1..length, later embedded into real node indices.
struct LinearPlan {
    int length = 0;
    std::vector<std::vector<int>> T;   // index p-1
    std::map<int, int> serving;
    std::map<int, std::vector<int>> cancel;
    long long active = 0;
    long long backhaul = 0;
};

void append_block(LinearPlan& plan, const LinearBlock& b) {
    const int o = plan.length;
    const int shift = b.L / 2;
    const int p = b.head;
    plan.T.resize(o + b.length());
    for (int i = 1; i <= p; ++i) {
        std::vector<int> T;
        for (int u = i; u <= p; ++u) T.push_back(o + u + shift);
        std::vector<int> C;
        for (int c = i + 1; c <= p; ++c) C.push_back(o + c);
        plan.T[o + i - 1] = std::move(T);
        plan.serving[o + i] = o + i + shift;
        plan.cancel[o + i] = std::move(C);
    }
    for (int i = p + b.L + 1; i <= b.length(); ++i) {
        std::vector<int> T;
        for (int u = p + 1; u <= i - b.L; ++u) T.push_back(o + u + shift);
        // From the served receiver outward: each step adds one new coefficient.
        std::vector<int> C;
        for (int c = i - 1; c >= p + b.L + 1; --c) C.push_back(o + c);
        plan.T[o + i - 1] = std::move(T);
        plan.serving[o + i] = o + i - b.L + shift;
        plan.cancel[o + i] = std::move(C);
    }
    plan.length += b.length();
    plan.active += b.active();
    plan.backhaul += b.backhaul();
}

LinearPlan plan_runs(const std::vector<BlockRun>& parts) {
    LinearPlan plan;
    for (const auto& run : parts)
        for (int c = 0; c < run.count; ++c) append_block(plan, run.block);
    return plan;
}

// Maps chain position p to receiver rx[p-1] and transmitter tx[p-1].
void embed(const LinearPlan& plan, const std::vector<int>& rx, const std::vector<int>& tx,
           MessageAssignment& assignment, ZfScheme& scheme) {
    for (int p = 1; p <= plan.length; ++p) {
        std::vector<int> T;
        for (int u : plan.T[p - 1]) T.push_back(tx[u - 1]);
        assignment.set(rx[p - 1], std::move(T));
    }
    for (auto [p, t] : plan.serving) {
        scheme.active.push_back(rx[p - 1]);
        scheme.serving[rx[p - 1]] = tx[t - 1];
        std::vector<int> C;
        for (int c : plan.cancel.at(p)) C.push_back(rx[c - 1]);
        scheme.cancel_at[rx[p - 1]] = std::move(C);
    }
}

void finish(GeneratedScheme& g) {
    auto& s = g.scheme;
    std::sort(s.active.begin(), s.active.end());
    std::vector<char> used(s.K + 1, 0);
    for (int i : s.active)
        for (int t : g.assignment.transmit_set(i)) used[t] = 1;
    s.deactivated.clear();
    for (int t = 1; t <= s.K; ++t)
        if (!used[t]) s.deactivated.push_back(t);
}

std::vector<int> iota_vec(int from, int count) {
    std::vector<int> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

}  // namespace

GeneratedScheme convex_combination(const std::vector<BlockRun>& parts, int K, TailPolicy tail) {
    if (parts.empty()) throw InvalidParameter("no parts to combine");
    const int L = parts.front().block.L;
    for (const auto& run : parts) {
        if (run.block.L != L) throw InvalidParameter("parts target different topology families");
        if (run.count < 0) throw InvalidParameter("negative block count");
    }
    LinearPlan plan = plan_runs(parts);
    if (K == 0) K = plan.length;
    if (plan.length == 0 || K < plan.length)
        throw InvalidParameter("blocks do not fit in K");
    if (K != plan.length && tail == TailPolicy::Reject)
        throw InvalidParameter("K is not a whole number of blocks");

    GeneratedScheme g{MessageAssignment(K), ZfScheme{}};
    g.scheme.K = K;
    const auto idx = iota_vec(1, plan.length);
    embed(plan, idx, idx, g.assignment, g.scheme);
    g.scheme.declared_pudof = Rational(plan.active, K);
    g.scheme.declared_backhaul = Rational(plan.backhaul, K);
    g.scheme.name = "linear-blocks(L=" + std::to_string(L) + ")";
    finish(g);
    return g;
}

GeneratedScheme wyner_backhaul_scheme(int K, int B, TailPolicy tail) {
    if (K < 1) throw InvalidParameter("K must be positive");
    const LinearBlock b = backhaul_block(B);
    if (tail == TailPolicy::Reject && K % b.length() != 0)
        throw InvalidParameter("K must be a multiple of 4B");
    if (K < b.length()) throw InvalidParameter("K is smaller than one block of 4B users");
    auto g = convex_combination({{b, K / b.length()}}, K, tail);
    g.scheme.name = "wyner-backhaul(B=" + std::to_string(B) + ")";
    return g;
}

GeneratedScheme locally_connected_scheme(int K, int L, int M, TailPolicy tail) {
    if (K < 1) throw InvalidParameter("K must be positive");
    const LinearBlock b = local_block(M, L);
    if (tail == TailPolicy::Reject && K % b.length() != 0)
        throw InvalidParameter("K must be a multiple of 2M+L");
    if (K < b.length()) throw InvalidParameter("K is smaller than one block of 2M+L users");
    auto g = convex_combination({{b, K / b.length()}}, K, tail);
    g.scheme.name = "local(L=" + std::to_string(L) + ",M=" + std::to_string(M) + ")";
    return g;
}

Table1Plan table1_plan(int L) {
    if (L < 2 || L > 6) throw InvalidParameter("load-one rows cover L = 2..6");
    Table1Plan plan;
    plan.L = L;
    int M1 = 1;
    while (local_block(M1 + 1, L).load() <= 1) ++M1;
    const LinearBlock b1 = local_block(M1, L);
    if (b1.load() == Rational(1)) {
        plan.Ms = {M1};
        plan.lambda = 1;
        plan.user_ratio = {1, 0};
        plan.tile = {{b1, 1}};
    } else {
        const LinearBlock b2 = local_block(M1 + 1, L);
        plan.Ms = {M1, M1 + 1};
        // lambda*B1 + (1-lambda)*B2 = 1
        plan.lambda = (b2.load() - 1) / (b2.load() - b1.load());
        const Rational other = 1 - plan.lambda;
        const long long r1 = plan.lambda.numerator() * other.denominator();
        const long long r2 = other.numerator() * plan.lambda.denominator();
        const long long g = std::gcd(r1, r2);
        plan.user_ratio = {r1 / g, r2 / g};
        // r1*x users must be whole blocks of b1, r2*x whole blocks of b2.
        const long long need1 = b1.length() / std::gcd<long long>(b1.length(), plan.user_ratio.first);
        const long long need2 = b2.length() / std::gcd<long long>(b2.length(), plan.user_ratio.second);
        const long long x = std::lcm(need1, need2);
        plan.tile = {{b1, static_cast<int>(plan.user_ratio.first * x / b1.length())},
                     {b2, static_cast<int>(plan.user_ratio.second * x / b2.length())}};
    }
    long long len = 0, act = 0, load = 0;
    for (const auto& run : plan.tile) {
        len += static_cast<long long>(run.count) * run.block.length();
        act += static_cast<long long>(run.count) * run.block.active();
        load += run.count * run.block.backhaul();
    }
    plan.tile_length = static_cast<int>(len);
    plan.pudof = Rational(act, len);
    plan.backhaul = Rational(load, len);
    return plan;
}

GeneratedScheme table1_scheme(int K, int L) {
    const Table1Plan plan = table1_plan(L);
    if (K < 1 || K % plan.tile_length != 0)
        throw InvalidParameter("K must be a multiple of " + std::to_string(plan.tile_length) +
                               " for L=" + std::to_string(L));
    std::vector<BlockRun> runs;
    for (int r = 0; r < K / plan.tile_length; ++r)
        for (const auto& run : plan.tile) runs.push_back(run);
    auto g = convex_combination(runs, K);
    g.scheme.name = "table1(L=" + std::to_string(L) + ")";
    return g;
}

GeneratedScheme two_dim_scheme(int K) {
    const int n = exact_sqrt(K);
    if (n < 0 || K < 1) throw InvalidParameter("K must be a perfect square");
    if (n % 12 != 0)
        throw InvalidParameter("sqrt(K) must be a multiple of 12 (row triples, blocks of 5 and 7)");
    std::vector<BlockRun> runs;
    for (int r = 0; r < n / 12; ++r) {
        runs.push_back({local_block(2, 1), 1});
        runs.push_back({local_block(3, 1), 1});
    }
    const LinearPlan plan = plan_runs(runs);

    GeneratedScheme g{MessageAssignment(K), ZfScheme{}};
    g.scheme.K = K;
    auto row = [n](int r) { return iota_vec(r * n + 1, n); };
    for (int base = 0; base < n; base += 3) {
        embed(plan, row(base), row(base), g.assignment, g.scheme);
        embed(plan, row(base + 2), row(base + 1), g.assignment, g.scheme);
    }
    const long long chains = 2LL * n / 3;
    g.scheme.declared_pudof = Rational(chains * plan.active, K);
    g.scheme.declared_backhaul = Rational(chains * plan.backhaul, K);
    g.scheme.name = "two-dim";
    finish(g);
    return g;
}

RowMetrics receiver_row_metrics(const GeneratedScheme& g, int n, int row) {
    if (n < 1 || row < 0 || row >= n || g.scheme.K != n * n)
        throw InvalidParameter("row outside the grid");
    RowMetrics m;
    long long load = 0;
    for (int i = row * n + 1; i <= (row + 1) * n; ++i) {
        if (g.scheme.is_active(i)) ++m.active;
        load += static_cast<long long>(g.assignment.transmit_set(i).size());
    }
    m.pudof = Rational(m.active, n);
    m.backhaul = Rational(load, n);
    return m;
}

GeneratedScheme hexagonal_coset_scheme(const HexNetwork& net) {
    const int K = net.lattice.size();
    GeneratedScheme g{MessageAssignment(K), ZfScheme{}};
    g.scheme.K = K;
    for (int v = 1; v <= K; ++v) {
        if (net.lattice.coset(v) != Coset::Circle) continue;
        g.assignment.set(v, {v});
        g.scheme.active.push_back(v);
        g.scheme.serving[v] = v;
        g.scheme.cancel_at[v] = {};
    }
    const auto c = static_cast<long long>(g.scheme.active.size());
    g.scheme.declared_pudof = Rational(c, K);
    g.scheme.declared_backhaul = Rational(c, K);
    g.scheme.name = "hex-coset";
    finish(g);
    return g;
}

std::vector<std::string> decomposition_violations(const NetworkTopology& topology,
                                                  const LinearDecomposition& d) {
    std::vector<std::string> bad;
    const int K = topology.K();
    std::vector<int> owner(K + 1, -2);  // -1 deactivated, >=0 chain id
    auto claim = [&](int v, int who) {
        if (v < 1 || v > K) {
            bad.push_back("node " + std::to_string(v) + " outside [K]");
            return;
        }
        if (owner[v] != -2) bad.push_back("node " + std::to_string(v) + " listed twice");
        owner[v] = who;
    };
    for (int v : d.deactivated) claim(v, -1);
    std::vector<int> pos(K + 1, 0);
    for (std::size_t c = 0; c < d.chains.size(); ++c)
        for (std::size_t p = 0; p < d.chains[c].size(); ++p) {
            claim(d.chains[c][p], static_cast<int>(c));
            if (d.chains[c][p] >= 1 && d.chains[c][p] <= K) pos[d.chains[c][p]] = static_cast<int>(p);
        }
    if (!bad.empty()) return bad;
    for (int v = 1; v <= K; ++v)
        if (owner[v] == -2) bad.push_back("node " + std::to_string(v) + " not covered");
    if (K % 3 == 0 && static_cast<int>(d.deactivated.size()) != K / 3)
        bad.push_back("deactivated set is not a third of the nodes");
    for (int v = 1; v <= K; ++v) {
        if (owner[v] < 0) continue;
        const int len = static_cast<int>(d.chains[owner[v]].size());
        int expected = 1 + (pos[v] > 0) + (pos[v] + 1 < len);
        int seen = 0;
        for (int u : topology.hears(v)) {
            if (owner[u] < 0) continue;
            if (owner[u] != owner[v]) {
                bad.push_back("edge between chains at nodes " + std::to_string(v) + "," + std::to_string(u));
                continue;
            }
            if (std::abs(pos[u] - pos[v]) > 1)
                bad.push_back("chain node " + std::to_string(v) + " hears a non-adjacent chain node");
            else
                ++seen;
        }
        if (seen != expected)
            bad.push_back("chain node " + std::to_string(v) + " misses a chain neighbour");
    }
    return bad;
}

namespace {

// Components of the graph left after deleting `removed`, ordered as paths; empty if not paths.
std::vector<std::vector<int>> path_components(const NetworkTopology& topo, const std::vector<char>& removed) {
    const int K = topo.K();
    std::vector<std::vector<int>> adj(K + 1);
    for (int v = 1; v <= K; ++v) {
        if (removed[v]) continue;
        for (int u : topo.hears(v))
            if (u != v && !removed[u]) adj[v].push_back(u);
        if (adj[v].size() > 2) return {};
    }
    std::vector<char> seen(K + 1, 0);
    std::vector<std::vector<int>> chains;
    for (int v = 1; v <= K; ++v) {
        if (removed[v] || seen[v] || adj[v].size() == 2) continue;
        std::vector<int> chain;
        int prev = 0, cur = v;
        while (cur) {
            seen[cur] = 1;
            chain.push_back(cur);
            int next = 0;
            for (int u : adj[cur])
                if (u != prev && !seen[u]) next = u;
            prev = cur;
            cur = next;
        }
        chains.push_back(std::move(chain));
    }
    for (int v = 1; v <= K; ++v)
        if (!removed[v] && !seen[v]) return {};  // a cycle survived
    return chains;
}

}  // namespace

LinearDecomposition decompose_hexagonal_to_linear(const HexNetwork& net) {
    const int n = net.lattice.n();
    if (n < 3 || n % 3 != 0) throw InvalidParameter("decomposition needs 3 | n");
    const int K = net.lattice.size();
    for (Coset drop : {Coset::Square, Coset::Circle, Coset::Diamond}) {
        std::vector<char> removed(K + 1, 0);
        LinearDecomposition d;
        for (int v = 1; v <= K; ++v)
            if (net.lattice.coset(v) == drop) {
                removed[v] = 1;
                d.deactivated.push_back(v);
            }
        d.chains = path_components(net.topology, removed);
        if (d.chains.empty()) continue;
        if (decomposition_violations(net.topology, d).empty()) return d;
    }
    throw DecompositionFailure("no coset deletion leaves L=2 chains");
}

GeneratedScheme hexagonal_cooperative_scheme(const HexNetwork& net) {
    const LinearDecomposition d = decompose_hexagonal_to_linear(net);
    const int K = net.lattice.size();
    GeneratedScheme g{MessageAssignment(K), ZfScheme{}};
    g.scheme.K = K;
    long long active = 0, load = 0;
    for (const auto& chain : d.chains) {
        const int len = static_cast<int>(chain.size());
        if (len % 8 != 0)
            throw InvalidParameter("chain of length " + std::to_string(len) + " is not a multiple of 8");
        const LinearPlan plan = plan_runs({{local_block(3, 2), len / 8}});
        embed(plan, chain, chain, g.assignment, g.scheme);
        active += plan.active;
        load += plan.backhaul;
    }
    g.scheme.declared_pudof = Rational(active, K);
    g.scheme.declared_backhaul = Rational(load, K);
    g.scheme.name = "hex-cooperative";
    finish(g);
    return g;
}

}  // namespace dofnet
