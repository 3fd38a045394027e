#include "dofnet/converse.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace dofnet {

namespace {

// Transmitter that can actually deliver W_i, or 0.
int effective_source(const NetworkTopology& topo, const MessageAssignment& a, int i) {
    const auto& T = a.transmit_set(i);
    if (T.size() != 1 || !topo.hears(i, T[0])) return 0;
    return T[0];
}

void require_single(const MessageAssignment& a) {
    if (a.max_size() > 1) throw PreconditionViolation("assignment has a transmit set larger than one");
}

}  // namespace

std::vector<Constraint> lemma_pairwise_bounds(const NetworkTopology& topology,
                                              const MessageAssignment& assignment) {
    require_single(assignment);
    if (assignment.K() != topology.K()) throw InvalidParameter("assignment and topology differ in K");
    std::vector<Constraint> out;
    for (int i = 1; i <= topology.K(); ++i) {
        const int j = effective_source(topology, assignment, i);
        if (j == 0) {
            out.push_back({Constraint::Kind::Zero, i, 0, 0});
            continue;
        }
        for (int k : topology.heard_at(j))
            if (k != i) out.push_back({Constraint::Kind::Pair, i, k, j});
    }
    return out;
}

bool constraint_holds(const NetworkTopology& topology, const MessageAssignment& assignment,
                      const Constraint& c) {
    const int K = topology.K();
    if (c.i < 1 || c.i > K) return false;
    const auto& T = assignment.transmit_set(c.i);
    if (c.kind == Constraint::Kind::Zero)
        return T.empty() || (T.size() == 1 && !topology.hears(c.i, T[0]));
    return c.k >= 1 && c.k <= K && c.k != c.i && T.size() == 1 && T[0] == c.via &&
           topology.hears(c.k, c.via);
}

Rational packing_bound(const std::vector<int>& nodes, const std::vector<Constraint>& constraints) {
    std::map<int, int> local;
    for (int v : nodes) local.emplace(v, 0);
    for (const auto& c : constraints)
        if (c.kind == Constraint::Kind::Zero) local.erase(c.i);
    int n = 0;
    for (auto& [v, id] : local) id = n++;
    std::vector<std::vector<int>> adj(n);
    for (const auto& c : constraints) {
        if (c.kind != Constraint::Kind::Pair) continue;
        auto x = local.find(c.i), y = local.find(c.k);
        if (x == local.end() || y == local.end()) continue;
        adj[x->second].push_back(y->second);
        adj[y->second].push_back(x->second);
    }
    // Fractional packing optimum = n - nu/2, nu = maximum matching of the bipartite double cover.
    std::vector<int> match_right(n, -1);
    std::function<bool(int, std::vector<char>&)> augment = [&](int u, std::vector<char>& seen) {
        for (int w : adj[u]) {
            if (seen[w]) continue;
            seen[w] = 1;
            if (match_right[w] < 0 || augment(match_right[w], seen)) {
                match_right[w] = u;
                return true;
            }
        }
        return false;
    };
    int nu = 0;
    for (int u = 0; u < n; ++u) {
        std::vector<char> seen(n, 0);
        if (augment(u, seen)) ++nu;
    }
    return Rational(2 * n - nu, 2);
}

namespace {

class GroupBuilder {
public:
    GroupBuilder(int K, const std::vector<Constraint>& all) : group_of_(K + 1, -1) {
        for (const auto& c : all) {
            if (c.kind == Constraint::Kind::Zero) zero_[c.i] = c;
            else touching_[c.i].push_back(c), touching_[c.k].push_back(c);
        }
    }

    bool covered(int v) const { return group_of_[v] >= 0; }

    void add(std::vector<int> nodes, const std::string& annotation) {
        Group g{nodes, 0, constraints_within(nodes), annotation};
        g.bound = packing_bound(g.nodes, g.constraints);
        if (g.bound * 2 > static_cast<long long>(g.nodes.size())) {
            // Fold into an earlier group linked by a pairwise constraint, if that keeps the ratio.
            std::set<int> linked;
            for (int v : nodes)
                for (const auto& c : touching_[v]) {
                    const int other = c.i == v ? c.k : c.i;
                    if (group_of_[other] >= 0) linked.insert(group_of_[other]);
                }
            for (int id : linked) {
                std::vector<int> merged = groups_[id].nodes;
                merged.insert(merged.end(), nodes.begin(), nodes.end());
                auto cons = constraints_within(merged);
                Rational b = packing_bound(merged, cons);
                if (b * 2 <= static_cast<long long>(merged.size())) {
                    groups_[id].nodes = std::move(merged);
                    groups_[id].constraints = std::move(cons);
                    groups_[id].bound = b;
                    groups_[id].annotation += "+" + annotation;
                    for (int v : nodes) group_of_[v] = id;
                    return;
                }
            }
        }
        for (int v : nodes) group_of_[v] = static_cast<int>(groups_.size());
        groups_.push_back(std::move(g));
    }

    std::vector<Group> take() { return std::move(groups_); }

private:
    std::vector<Constraint> constraints_within(const std::vector<int>& nodes) const {
        std::set<int> in(nodes.begin(), nodes.end());
        std::vector<Constraint> out;
        for (int v : nodes) {
            auto z = zero_.find(v);
            if (z != zero_.end()) out.push_back(z->second);
        }
        for (int v : nodes) {
            auto t = touching_.find(v);
            if (t == touching_.end()) continue;
            for (const auto& c : t->second)
                if (c.i == v && in.count(c.k)) out.push_back(c);
        }
        return out;
    }

    std::vector<int> group_of_;
    std::vector<Group> groups_;
    std::map<int, Constraint> zero_;
    std::map<int, std::vector<Constraint>> touching_;
};

Rational total(const std::vector<Group>& groups, std::size_t uncovered) {
    Rational sum = static_cast<long long>(uncovered);
    for (const auto& g : groups) sum += g.bound;
    return sum;
}

}  // namespace

GroupCertificate algorithm1_certify(const HexNetwork& net, const MessageAssignment& assignment) {
    require_single(assignment);
    const auto& topo = net.topology;
    const auto& lat = net.lattice;
    const int K = topo.K();
    if (assignment.K() != K) throw InvalidParameter("assignment and lattice differ in size");

    std::vector<int> src(K + 1, 0);
    for (int i = 1; i <= K; ++i) src[i] = effective_source(topo, assignment, i);

    const auto tris = main_triangles(lat);
    std::vector<int> tri_of(K + 1, -1);
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int v : tris[t]) tri_of[v] = static_cast<int>(t);
    auto in_tri = [&](int v, int t) { return v > 0 && tri_of[v] == t; };

    std::vector<int> state(tris.size(), 0);
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int i : tris[t])
            if (in_tri(src[i], static_cast<int>(t))) ++state[t];

    std::vector<char> outsider(K + 1, 0), uncovered(K + 1, 0);
    for (int v = 1; v <= K; ++v) {
        const int t = tri_of[v];
        if (t < 0) {
            uncovered[v] = 1;
            continue;
        }
        bool o = !in_tri(src[v], t);
        for (int i : tris[t])
            if (src[i] == v) o = false;
        outsider[v] = o;
    }

    GroupBuilder S(K, lemma_pairwise_bounds(topo, assignment));

    // self-serving nodes paired with the triangle partner of least real part
    for (int v = 1; v <= K; ++v) {
        if (src[v] != v || uncovered[v] || S.covered(v)) continue;
        int j = 0;
        for (int u : tris[tri_of[v]]) {
            if (u == v) continue;
            if (j == 0 || twice_real_part(lat.coords(u)) < twice_real_part(lat.coords(j))) j = u;
        }
        std::vector<int> nodes{v};
        if (!S.covered(j)) nodes.push_back(j);
        S.add(nodes, "self-serving");
    }

    // outsiders through their middle triangles
    for (int v = 1; v <= K; ++v) {
        if (!outsider[v] || uncovered[v] || S.covered(v)) continue;
        const auto mid = middle_triangle(lat, v);
        bool edge = !mid.has_value();
        if (mid)
            for (int u : *mid)
                if (uncovered[u]) edge = true;
        if (edge) {
            uncovered[v] = 1;
            continue;
        }
        std::vector<int> rest, out_rest;
        for (int u : *mid)
            if (u != v && !S.covered(u)) {
                rest.push_back(u);
                if (outsider[u]) out_rest.push_back(u);
            }
        if (out_rest.size() == 2) S.add({v, out_rest[0], out_rest[1]}, "outsider-triple");
        else if (out_rest.size() == 1) S.add({v, out_rest[0]}, "outsider-pair");
        else if (std::find(rest.begin(), rest.end(), src[v]) != rest.end()) S.add({v, src[v]}, "outsider-served");
        else S.add({v}, "outsider-single");
    }

    // what is left of triangles in states S1..S3
    for (std::size_t t = 0; t < tris.size(); ++t) {
        if (state[t] == 0) continue;
        std::vector<int> left;
        for (int u : tris[t])
            if (!S.covered(u) && !uncovered[u]) left.push_back(u);
        if (!left.empty()) S.add(left, "residual-S" + std::to_string(state[t]));
    }
    for (int v = 1; v <= K; ++v)
        if (!S.covered(v) && !uncovered[v]) S.add({v}, "leftover");

    GroupCertificate cert;
    cert.groups = S.take();
    for (int v = 1; v <= K; ++v)
        if (uncovered[v]) cert.uncovered.push_back(v);
    cert.certified_bound = total(cert.groups, cert.uncovered.size());
    return cert;
}

GroupCertificate triangle_state_bound(const HexNetwork& net, const AvoidanceSchedule& schedule) {
    const auto& topo = net.topology;
    const auto& lat = net.lattice;
    const int K = topo.K();
    if (auto bad = schedule_violations(topo, schedule); !bad.empty())
        throw PreconditionViolation("invalid schedule: " + bad.front());

    std::vector<int> served_by(K + 1, 0), serves(K + 1, 0);
    for (auto [r, t] : schedule.pairs) {
        served_by[r] = t;
        serves[t] = r;
    }
    const auto tris = main_triangles(lat);
    std::vector<int> tri_of(K + 1, -1);
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int v : tris[t]) tri_of[v] = static_cast<int>(t);

    // 0: silent, 1: served inside, 2: transmits out only, 3: receives from outside only
    std::vector<int> state(tris.size(), 0);
    std::vector<int> self_node(tris.size(), 0);
    for (std::size_t t = 0; t < tris.size(); ++t) {
        int tx_out = 0, rx_in = 0, inside = 0;
        for (int v : tris[t]) {
            if (serves[v]) (tri_of[serves[v]] == static_cast<int>(t) ? inside : tx_out)++;
            if (served_by[v] && tri_of[served_by[v]] != static_cast<int>(t)) ++rx_in;
            if (served_by[v] == v) self_node[t] = v;
        }
        if (inside) {
            if (inside > 1 || tx_out || rx_in)
                throw PreconditionViolation("triangle mixes inside service with other activity");
            state[t] = 1;
        } else if (tx_out && rx_in) {
            throw PreconditionViolation("triangle both transmits out and receives in");
        } else {
            state[t] = tx_out ? 2 : rx_in ? 3 : 0;
        }
    }

    std::vector<char> uncovered(K + 1, 0), grouped(K + 1, 0);
    for (int v = 1; v <= K; ++v)
        if (tri_of[v] < 0) uncovered[v] = 1;

    struct Cross {
        int a, b, c;   // b transmits to c; a is the third node of their middle triangle
    };
    std::vector<Cross> cross;
    for (auto [r, t] : schedule.pairs) {
        if (r == t || uncovered[r] || uncovered[t] || tri_of[r] == tri_of[t]) continue;
        const auto mid = middle_triangle(lat, t);
        int a = 0;
        bool fine = mid.has_value() && std::find(mid->begin(), mid->end(), r) != mid->end();
        if (fine) {
            for (int u : *mid)
                if (u != r && u != t) a = u;
            fine = !uncovered[a];
        }
        if (!fine) {
            uncovered[r] = uncovered[t] = 1;
            continue;
        }
        cross.push_back({a, t, r});
    }
    std::vector<int> cross_at(K + 1, -1);   // node a -> cross pair
    for (std::size_t p = 0; p < cross.size(); ++p) cross_at[cross[p].a] = static_cast<int>(p);
    std::vector<char> used(cross.size(), 0);

    std::vector<Group> groups;
    auto emit = [&](std::vector<int> nodes, long long bound, std::string note) {
        for (int v : nodes) grouped[v] = 1;
        groups.push_back(Group{std::move(nodes), Rational(bound), {}, std::move(note)});
    };

    for (std::size_t p = 0; p < cross.size(); ++p) {
        if (used[p]) continue;
        const auto [a, b, c] = cross[p];
        const int t3 = tri_of[a];
        used[p] = 1;
        if (state[t3] == 2 || state[t3] == 3) {
            emit({a, b, c}, 1, "case1:S" + std::to_string(state[t3]));
        } else if (state[t3] == 0) {
            std::vector<int> nodes(tris[t3].begin(), tris[t3].end());
            long long k = 0;
            for (int u : tris[t3]) {
                const int q = cross_at[u];
                if (q < 0 || (used[q] && q != static_cast<int>(p))) continue;
                used[q] = 1;
                nodes.push_back(cross[q].b);
                nodes.push_back(cross[q].c);
                ++k;
            }
            emit(std::move(nodes), k, "case3:S0");
        } else {
            std::vector<int> nodes(tris[t3].begin(), tris[t3].end());
            nodes.push_back(b);
            nodes.push_back(c);
            long long bound = 2;
            const int a2 = self_node[t3];
            if (a2) {
                int a1 = 0;
                for (int u : tris[t3])
                    if (u != a && u != a2) a1 = u;
                const int q = cross_at[a1];
                if (q >= 0 && !used[q]) {
                    used[q] = 1;
                    nodes.push_back(cross[q].b);
                    nodes.push_back(cross[q].c);
                    bound = 3;
                }
            }
            emit(std::move(nodes), bound, bound == 3 ? "case2:seven" : "case2:five");
        }
    }

    for (std::size_t t = 0; t < tris.size(); ++t) {
        std::vector<int> left;
        long long active = 0;
        for (int u : tris[t])
            if (!grouped[u] && !uncovered[u]) {
                left.push_back(u);
                if (served_by[u]) ++active;
            }
        if (left.empty()) continue;
        emit(std::move(left), active, "triangle:S" + std::to_string(state[t]));
    }

    GroupCertificate cert;
    cert.groups = std::move(groups);
    for (int v = 1; v <= K; ++v)
        if (uncovered[v]) cert.uncovered.push_back(v);
    cert.certified_bound = total(cert.groups, cert.uncovered.size());
    return cert;
}

std::vector<std::string> certificate_violations(const NetworkTopology& topology, const GroupCertificate& cert,
                                                const MessageAssignment* assignment) {
    std::vector<std::string> bad;
    const int K = topology.K();
    std::vector<int> seen(K + 1, 0);
    auto mark = [&](int v) {
        if (v < 1 || v > K) bad.push_back("node " + std::to_string(v) + " outside [K]");
        else if (seen[v]++) bad.push_back("node " + std::to_string(v) + " appears twice");
    };
    for (const auto& g : cert.groups)
        for (int v : g.nodes) mark(v);
    for (int v : cert.uncovered) mark(v);
    for (int v = 1; v <= K; ++v)
        if (!seen[v]) bad.push_back("node " + std::to_string(v) + " not accounted for");
    if (total(cert.groups, cert.uncovered.size()) != cert.certified_bound)
        bad.push_back("certified bound is not the sum of its parts");
    if (!assignment) return bad;
    for (const auto& g : cert.groups) {
        for (const auto& c : g.constraints)
            if (!constraint_holds(topology, *assignment, c))
                bad.push_back("constraint on message " + std::to_string(c.i) + " does not hold");
        if (packing_bound(g.nodes, g.constraints) != g.bound)
            bad.push_back("group bound differs from the packing bound of its constraints");
    }
    return bad;
}

BackhaulConverseResult backhaul_converse(const MessageAssignment& assignment, const Rational& B) {
    if (B.denominator() != 1 || B < 1) throw Unsupported("backhaul converse needs a positive integer B");
    if (!validate_backhaul(assignment, B)) throw PreconditionViolation("assignment exceeds backhaul B");
    const int K = assignment.K();
    const int b = static_cast<int>(B.numerator());
    BackhaulConverseResult best;
    best.bound = K + 1;
    for (int M = 0; M <= 2 * b - 1; ++M) {
        std::vector<int> S;
        for (int i = 1; i <= K; ++i)
            if (static_cast<int>(assignment.transmit_set(i).size()) <= M) S.push_back(i);
        const int s = static_cast<int>(S.size());
        const int count = s >= M + 1 ? (s - M - 1) / (2 * M + 1) + 1 : 0;
        if (K - count >= best.bound) continue;
        best.M = M;
        best.bound = K - count;
        // positions counted from the top of S so every anchor s+M stays inside [K]
        best.A_bar.clear();
        for (int j = 1; j <= count; ++j) best.A_bar.push_back(S[s - M - (2 * M + 1) * (j - 1) - 1]);
        std::sort(best.A_bar.begin(), best.A_bar.end());
        best.S = std::move(S);
    }
    best.slack = Rational(best.bound) - Rational(static_cast<long long>(4 * b - 1) * K, 4 * b);
    return best;
}

bool reconstructibility_check(const NetworkTopology& topology, const MessageAssignment& assignment,
                              const std::vector<int>& A) {
    const int K = topology.K();
    std::vector<char> in_A(K + 1, 0), known(K + 1, 1);
    for (int r : A)
        if (r >= 1 && r <= K) in_A[r] = 1;
    for (int i = 1; i <= K; ++i)
        if (!in_A[i])
            for (int t : assignment.transmit_set(i)) known[t] = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        for (int r = 1; r <= K; ++r) {
            if (!in_A[r]) continue;
            int missing = 0, which = 0;
            for (int t : topology.hears(r))
                if (!known[t]) ++missing, which = t;
            if (missing == 1) {
                known[which] = 1;
                progress = true;
            }
        }
    }
    return std::all_of(known.begin() + 1, known.end(), [](char k) { return k != 0; });
}

}  // namespace dofnet
