#include "dofnet/oracle.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>

namespace dofnet {

std::vector<std::string> schedule_violations(const NetworkTopology& topology,
                                             const AvoidanceSchedule& schedule) {
    std::vector<std::string> bad;
    const int K = topology.K();
    std::vector<char> rx_on(K + 1, 0), tx_on(K + 1, 0);
    for (auto [r, t] : schedule.pairs) {
        if (r < 1 || r > K || t < 1 || t > K) {
            bad.push_back("pair outside [K]");
            return bad;
        }
        if (rx_on[r]) bad.push_back("receiver " + std::to_string(r) + " scheduled twice");
        if (tx_on[t]) bad.push_back("transmitter " + std::to_string(t) + " scheduled twice");
        rx_on[r] = tx_on[t] = 1;
        if (!topology.hears(r, t))
            bad.push_back("receiver " + std::to_string(r) + " does not hear transmitter " + std::to_string(t));
    }
    for (auto [r, t] : schedule.pairs)
        for (int u : topology.hears(r))
            if (u != t && tx_on[u])
                bad.push_back("receiver " + std::to_string(r) + " hears active transmitter " + std::to_string(u));
    return bad;
}

AvoidanceSchedule schedule_from_scheme(const ZfScheme& scheme) {
    AvoidanceSchedule s;
    for (int i : scheme.active) s.pairs.emplace_back(i, scheme.serving.at(i));
    return s;
}

namespace {

class Deadline {
public:
    explicit Deadline(double seconds)
        : limited_(seconds > 0),
          end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds))) {}
    void check() const {
        if (limited_ && std::chrono::steady_clock::now() > end_)
            throw ResourceGuard("oracle time budget exhausted");
    }

private:
    bool limited_;
    std::chrono::steady_clock::time_point end_;
};

void guard_size(const NetworkTopology& topology, int node_limit) {
    if (topology.K() > node_limit)
        throw ResourceGuard("K=" + std::to_string(topology.K()) + " exceeds node limit " +
                            std::to_string(node_limit));
}

class Bits {
public:
    explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    int first() const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return static_cast<int>(k * 64 + std::countr_zero(w_[k]));
        return -1;
    }
    Bits operator&(const Bits& o) const {
        Bits r = *this;
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
        return r;
    }
    void and_not(const Bits& o) {
        for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    }

private:
    std::vector<std::uint64_t> w_;
};

// Maximum independent set of the conflict graph; colour classes are cliques of
// pairwise conflicting candidates, so each contributes at most one vertex.
class IndependentSetSearch {
public:
    IndependentSetSearch(const std::vector<Bits>& compatible, std::size_t n, const Deadline& deadline)
        : ok_(compatible), n_(n), deadline_(deadline) {}

    std::vector<int> run() {
        Bits all(n_);
        for (std::size_t v = 0; v < n_; ++v) all.set(v);
        std::vector<int> current;
        expand(current, all);
        return best_;
    }

    long long nodes() const { return nodes_; }

private:
    void expand(std::vector<int>& current, Bits P) {
        if (++nodes_ % 4096 == 0) deadline_.check();
        std::vector<int> order, colour;
        Bits Q = P;
        int k = 0;
        while (Q.any()) {
            ++k;
            Bits cls = Q;
            while (cls.any()) {
                const int v = cls.first();
                Q.reset(v);
                cls.reset(v);
                cls.and_not(ok_[v]);
                order.push_back(v);
                colour.push_back(k);
            }
        }
        for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
            if (static_cast<int>(current.size()) + colour[idx] <= static_cast<int>(best_.size())) return;
            const int v = order[idx];
            current.push_back(v);
            Bits next = P & ok_[v];
            if (next.any()) expand(current, next);
            else if (current.size() > best_.size()) best_ = current;
            current.pop_back();
            P.reset(v);
        }
    }

    const std::vector<Bits>& ok_;
    std::size_t n_;
    const Deadline& deadline_;
    std::vector<int> best_;
    long long nodes_ = 0;
};

}  // namespace

OracleResult max_avoidance_m1(const NetworkTopology& topology, int node_limit, double time_budget_s) {
    guard_size(topology, node_limit);
    const Deadline deadline(time_budget_s);
    const int K = topology.K();
    std::vector<std::pair<int, int>> cand;
    for (int r = 1; r <= K; ++r)
        for (int t : topology.hears(r)) cand.emplace_back(r, t);
    // receivers with many options first
    std::stable_sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
        return topology.hears(x.first).size() > topology.hears(y.first).size();
    });
    const std::size_t n = cand.size();
    std::vector<Bits> ok(n, Bits(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            auto [r1, t1] = cand[x];
            auto [r2, t2] = cand[y];
            const bool clash = r1 == r2 || t1 == t2 || topology.hears(r1, t2) || topology.hears(r2, t1);
            if (!clash) ok[x].set(y);
        }
    IndependentSetSearch search(ok, n, deadline);
    const auto best = search.run();
    OracleResult res;
    for (int v : best) res.witness.pairs.push_back(cand[v]);
    std::sort(res.witness.pairs.begin(), res.witness.pairs.end());
    res.value = res.witness.value();
    res.nodes_explored = search.nodes();
    return res;
}

namespace {

// Size of a maximum matching between `rows` and `cols` over the hearing relation.
int term_rank(const NetworkTopology& topo, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::vector<int> match_col(cols.size(), -1);
    std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t r, std::vector<char>& seen) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (seen[c] || !topo.hears(rows[r], cols[c])) continue;
            seen[c] = 1;
            if (match_col[c] < 0 || augment(static_cast<std::size_t>(match_col[c]), seen)) {
                match_col[c] = static_cast<int>(r);
                return true;
            }
        }
        return false;
    };
    int rank = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<char> seen(cols.size(), 0);
        if (augment(r, seen)) ++rank;
    }
    return rank;
}

// Message i with transmit set T is deliverable while nulled at the other active receivers.
bool message_feasible(const NetworkTopology& topo, int i, const std::vector<int>& T,
                      const std::vector<char>& on) {
    if (T.empty()) return false;
    std::vector<int> C;
    for (int k = 1; k <= topo.K(); ++k) {
        if (k == i || !on[k]) continue;
        for (int t : T)
            if (topo.hears(k, t)) {
                C.push_back(k);
                break;
            }
    }
    const int base = term_rank(topo, C, T);
    C.push_back(i);
    return term_rank(topo, C, T) == base + 1;
}

}  // namespace

bool zf_set_feasible(const NetworkTopology& topology, const MessageAssignment& assignment,
                     const std::vector<int>& active) {
    std::vector<char> on(topology.K() + 1, 0);
    for (int i : active) on[i] = 1;
    for (int i : active)
        if (!message_feasible(topology, i, assignment.transmit_set(i), on)) return false;
    return true;
}

CooperativeResult max_zf_with_assignment(const NetworkTopology& topology, const MessageAssignment& assignment,
                                         int node_limit, double time_budget_s) {
    guard_size(topology, node_limit);
    if (assignment.K() != topology.K()) throw InvalidParameter("assignment and topology differ in K");
    const Deadline deadline(time_budget_s);
    const int K = topology.K();
    std::vector<char> none(K + 1, 0);
    std::vector<int> cand;
    for (int i = 1; i <= K; ++i) {
        std::vector<char> alone = none;
        alone[i] = 1;
        if (message_feasible(topology, i, assignment.transmit_set(i), alone)) cand.push_back(i);
    }
    // receivers reached by each message's transmit set
    std::vector<std::vector<int>> reach(K + 1);
    for (int i = 1; i <= K; ++i) {
        std::vector<char> mark(K + 1, 0);
        for (int t : assignment.transmit_set(i))
            for (int k : topology.heard_at(t)) mark[k] = 1;
        for (int k = 1; k <= K; ++k)
            if (mark[k] && k != i) reach[i].push_back(k);
    }

    CooperativeResult res;
    res.assignment = assignment;
    std::vector<char> on(K + 1, 0);
    std::vector<int> current;
    std::function<void(std::size_t)> dfs = [&](std::size_t idx) {
        if (++res.nodes_explored % 4096 == 0) deadline.check();
        if (current.size() > res.active.size()) res.active = current;
        if (idx == cand.size()) return;
        if (current.size() + (cand.size() - idx) <= res.active.size()) return;
        const int m = cand[idx];
        on[m] = 1;
        bool ok = message_feasible(topology, m, assignment.transmit_set(m), on);
        for (int j : current) {
            if (!ok) break;
            // m joins C_j only if m hears a transmitter of T_j
            if (std::binary_search(reach[j].begin(), reach[j].end(), m))
                ok = message_feasible(topology, j, assignment.transmit_set(j), on);
        }
        if (ok) {
            current.push_back(m);
            dfs(idx + 1);
            current.pop_back();
        }
        on[m] = 0;
        dfs(idx + 1);
    };
    dfs(0);
    res.value = static_cast<int>(res.active.size());
    return res;
}

namespace {

// Smallest transmit set that makes message i deliverable against active set `on`;
// empty when none of size <= cap exists.
std::vector<int> cheapest_transmit_set(const NetworkTopology& topo, int i, const std::vector<char>& on,
                                       int cap, long long& nodes, const Deadline& deadline) {
    const int K = topo.K();
    std::vector<int> pool;
    for (int t = 1; t <= K; ++t) {
        bool useful = false;
        for (int k : topo.heard_at(t))
            if (k == i || on[k]) useful = true;
        if (useful) pool.push_back(t);
    }
    std::vector<int> pick;
    for (int size = 1; size <= std::min<int>(cap, static_cast<int>(pool.size())); ++size) {
        std::vector<int> idx(size);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            if (++nodes % 4096 == 0) deadline.check();
            pick.clear();
            for (int k : idx) pick.push_back(pool[k]);
            if (message_feasible(topo, i, pick, on)) return pick;
            int k = size - 1;
            while (k >= 0 && idx[k] == static_cast<int>(pool.size()) - size + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return {};
}

}  // namespace

CooperativeResult max_avoidance_cooperative(const NetworkTopology& topology, const Rational& B,
                                            int node_limit, double time_budget_s) {
    guard_size(topology, node_limit);
    if (B < 0) throw InvalidParameter("B must be nonnegative");
    const Deadline deadline(time_budget_s);
    const int K = topology.K();
    const Rational cap_r = B * K;
    const long long budget = cap_r.numerator() / cap_r.denominator();
    CooperativeResult res;
    res.assignment = MessageAssignment(K);

    for (int s = std::min<long long>(K, budget); s >= 1; --s) {
        std::vector<int> idx(s);
        std::iota(idx.begin(), idx.end(), 1);
        while (true) {
            std::vector<char> on(K + 1, 0);
            for (int i : idx) on[i] = 1;
            MessageAssignment a(K);
            long long spent = 0;
            bool ok = true;
            for (std::size_t p = 0; p < idx.size() && ok; ++p) {
                // every later message needs at least one transmitter
                const long long cap = budget - spent - static_cast<long long>(idx.size() - p - 1);
                if (cap < 1) {
                    ok = false;
                    break;
                }
                auto T = cheapest_transmit_set(topology, idx[p], on, static_cast<int>(cap),
                                               res.nodes_explored, deadline);
                if (T.empty()) ok = false;
                else {
                    spent += static_cast<long long>(T.size());
                    a.set(idx[p], std::move(T));
                }
            }
            if (ok) {
                res.value = s;
                res.active = idx;
                res.assignment = a;
                return res;
            }
            int k = s - 1;
            while (k >= 0 && idx[k] == K - s + k + 1) --k;
            if (k < 0) break;
            ++idx[k];
            for (int j = k + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return res;
}

LowerBoundCheck certify_lower_bound(const NetworkTopology& topology, const MessageAssignment& assignment,
                                    const ZfScheme& scheme, int node_limit) {
    LowerBoundCheck chk;
    chk.scheme_value = static_cast<int>(scheme.active.size());
    chk.structural_ok = scheme_violations(topology, assignment, scheme).empty();
    if (!chk.structural_ok || chk.scheme_value == 0) return chk;
    if (assignment.max_size() <= 1) {
        if (topology.K() <= node_limit) chk.oracle_value = max_avoidance_m1(topology, node_limit).value;
    } else if (topology.K() <= std::min(node_limit, kDefaultCooperativeNodeLimit)) {
        chk.oracle_value = max_avoidance_cooperative(topology, metrics(assignment).B).value;
    }
    return chk;
}

}  // namespace dofnet
