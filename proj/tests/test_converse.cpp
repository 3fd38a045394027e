#include "dofnet/converse.hpp"
#include "dofnet/errors.hpp"
#include "dofnet/oracle.hpp"
#include "dofnet/schemes.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

using namespace dofnet;
using V = std::vector<int>;

namespace {

// Nine-node toy network: three main triangles a, b, c around one middle triangle.
// Index order (row-major over (b, a)):
//   1 a1 (2,-1)   2 b1 (1,0)   3 a3 (2,0)   4 a2 (3,0)   5 b3 (1,1)
//   6 b2 (2,1)    7 c1 (3,1)   8 c2 (3,2)   9 c3 (4,2)
HexNetwork toy_network() {
    return build_hexagonal_from({{2, -1}, {1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}, {4, 2}});
}

// a1 -> a2, b3 -> b1, b2 -> a3, c3 -> c2, c1 -> c1 (transmitter -> receiver)
MessageAssignment toy_assignment() {
    MessageAssignment a(9);
    a.set(4, {1});
    a.set(2, {5});
    a.set(3, {6});
    a.set(8, {9});
    a.set(7, {7});
    return a;
}

MessageAssignment random_m1(std::mt19937& rng, const NetworkTopology& topo, int empty_pct, int stray_pct) {
    MessageAssignment a(topo.K());
    for (int i = 1; i <= topo.K(); ++i) {
        const int roll = static_cast<int>(rng() % 100);
        if (roll < empty_pct) continue;
        if (roll < empty_pct + stray_pct) {
            a.set(i, {1 + static_cast<int>(rng() % topo.K())});
        } else {
            const auto& h = topo.hears(i);
            a.set(i, {h[rng() % h.size()]});
        }
    }
    return a;
}

AvoidanceSchedule random_schedule(std::mt19937& rng, const NetworkTopology& topo) {
    AvoidanceSchedule s;
    V order(topo.K());
    for (int i = 0; i < topo.K(); ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    for (int r : order) {
        const auto& h = topo.hears(r);
        AvoidanceSchedule trial = s;
        trial.pairs.emplace_back(r, h[rng() % h.size()]);
        std::sort(trial.pairs.begin(), trial.pairs.end());
        if (schedule_violations(topo, trial).empty()) s = trial;
    }
    return s;
}

Rational group_sum(const GroupCertificate& c) {
    Rational s(0);
    for (const auto& g : c.groups) s += g.bound;
    return s;
}

std::size_t covered(const GroupCertificate& c) {
    std::size_t n = 0;
    for (const auto& g : c.groups) n += g.nodes.size();
    return n;
}

}  // namespace

TEST_CASE("toy network layout") {
    auto net = toy_network();
    auto tris = main_triangles(net.lattice);
    std::set<std::set<int>> got;
    for (const auto& t : tris) got.insert({t.begin(), t.end()});
    CHECK(got == std::set<std::set<int>>{{1, 3, 4}, {2, 5, 6}, {7, 8, 9}});
    auto mid = middle_triangle(net.lattice, 3);
    REQUIRE(mid.has_value());
    CHECK(std::set<int>(mid->begin(), mid->end()) == std::set<int>{3, 6, 7});
    for (auto [r, t] : std::vector<std::pair<int, int>>{{4, 1}, {2, 5}, {3, 6}, {8, 9}})
        CHECK(net.topology.hears(r, t));
}

TEST_CASE("pairwise bounds") {
    auto net = toy_network();
    auto a = toy_assignment();
    auto cons = lemma_pairwise_bounds(net.topology, a);
    auto has_pair = [&](int x, int y) {
        for (const auto& c : cons)
            if (c.kind == Constraint::Kind::Pair && ((c.i == x && c.k == y) || (c.i == y && c.k == x))) return true;
        return false;
    };
    auto has_zero = [&](int x) {
        for (const auto& c : cons)
            if (c.kind == Constraint::Kind::Zero && c.i == x) return true;
        return false;
    };
    CHECK(has_pair(7, 8));   // c1 self-serving, c2 hears c1
    CHECK(has_pair(4, 1));   // a1 -> a2
    CHECK(has_pair(2, 5));   // b3 -> b1
    CHECK(has_pair(3, 6));   // b2 -> a3
    CHECK(has_zero(9));      // c3 unassigned
    for (const auto& c : cons) CHECK(constraint_holds(net.topology, a, c));

    NetworkTopology isolated(TopologyKind::Custom, 2, {{1}, {2}});
    MessageAssignment self(2, {{1}, {2}});
    for (const auto& c : lemma_pairwise_bounds(isolated, self))
        CHECK((c.kind == Constraint::Kind::Pair && c.i == c.k));

    MessageAssignment two(3, {{1, 2}, {}, {}});
    CHECK_THROWS_AS(lemma_pairwise_bounds(build_wyner(3), two), PreconditionViolation);
}

TEST_CASE("packing bound") {
    using K = Constraint::Kind;
    CHECK(packing_bound({1, 2}, {{K::Pair, 1, 2, 2}}) == Rational(1));
    CHECK(packing_bound({1, 2, 3}, {}) == Rational(3));
    CHECK(packing_bound({1, 2, 3}, {{K::Pair, 1, 2, 2}, {K::Pair, 2, 3, 3}, {K::Pair, 3, 1, 1}}) == Rational(3, 2));
    CHECK(packing_bound({1, 2, 3}, {{K::Zero, 1, 0, 0}, {K::Pair, 2, 3, 3}}) == Rational(1));
}

TEST_CASE("group certificate on the toy network") {
    auto net = toy_network();
    auto a = toy_assignment();
    auto cert = algorithm1_certify(net, a);
    CHECK(cert.certified_bound == Rational(4));
    CHECK(cert.uncovered.empty());
    CHECK(covered(cert) == 9);
    CHECK(certificate_violations(net.topology, cert, &a).empty());
    // Cumulative node sets after each step of the walk-through.
    const std::vector<std::set<int>> steps{{7, 8}, {1, 3, 4, 6, 7, 8}, {1, 2, 3, 4, 5, 6, 7, 8},
                                           {1, 2, 3, 4, 5, 6, 7, 8, 9}};
    std::set<int> acc;
    std::vector<std::set<int>> seen;
    for (const auto& g : cert.groups) {
        acc.insert(g.nodes.begin(), g.nodes.end());
        seen.push_back(acc);
    }
    for (const auto& s : steps) CHECK(std::find(seen.begin(), seen.end(), s) != seen.end());
    for (const auto& g : cert.groups) CHECK(2 * g.bound <= Rational(static_cast<long long>(g.nodes.size())));
    // Sound against the exact fixed-assignment optimum.
    CHECK(Rational(max_zf_with_assignment(net.topology, a).value) <= cert.certified_bound);
}

TEST_CASE("group certificate edge cases") {
    auto net = build_hexagonal(6);
    auto cert = algorithm1_certify(net, MessageAssignment(36));
    CHECK(cert.certified_bound == Rational(0) + Rational(static_cast<long long>(cert.uncovered.size())));
    CHECK(group_sum(cert) == Rational(0));
    MessageAssignment two(36);
    two.set(1, {1, 2});
    CHECK_THROWS_AS(algorithm1_certify(net, two), PreconditionViolation);
}

TEST_CASE("group certificate on random assignments") {
    std::mt19937 rng(1234);
    auto net = build_hexagonal(6);
    for (int trial = 0; trial < 150; ++trial) {
        auto a = random_m1(rng, net.topology, 20, 5);
        auto cert = algorithm1_certify(net, a);
        REQUIRE(certificate_violations(net.topology, cert, &a).empty());
        for (const auto& g : cert.groups) CHECK(2 * g.bound <= Rational(static_cast<long long>(g.nodes.size())));
        const long long cov = static_cast<long long>(covered(cert));
        CHECK(group_sum(cert) <= Rational((cov + 1) / 2));
    }
    // Soundness on lattices small enough for the exact fixed-assignment oracle.
    for (int n : {3, 4, 5}) {
        auto small = build_hexagonal(n);
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_m1(rng, small.topology, 15, 5);
            auto cert = algorithm1_certify(small, a);
            CHECK(certificate_violations(small.topology, cert, &a).empty());
            CHECK(Rational(max_zf_with_assignment(small.topology, a).value) <= cert.certified_bound);
        }
    }
}

TEST_CASE("triangle states for the coset scheme") {
    auto net = build_hexagonal(6);
    auto g = hexagonal_coset_scheme(net);
    auto sched = schedule_from_scheme(g.scheme);
    CHECK(sched.value() == 12);
    auto cert = triangle_state_bound(net, sched);
    CHECK(certificate_violations(net.topology, cert).empty());
    for (const auto& grp : cert.groups) {
        CHECK(grp.nodes.size() == 3);
        CHECK(grp.bound == Rational(1));
    }
    CHECK(Rational(sched.value()) <= cert.certified_bound);

    auto empty = triangle_state_bound(net, AvoidanceSchedule{});
    CHECK(group_sum(empty) == Rational(0));
    AvoidanceSchedule bad{{{1, 1}, {2, 2}}};
    CHECK_THROWS_AS(triangle_state_bound(net, bad), PreconditionViolation);
}

TEST_CASE("triangle states bound oracle witnesses and random schedules") {
    auto net = build_hexagonal(6);
    auto best = max_avoidance_m1(net.topology);
    auto cert = triangle_state_bound(net, best.witness);
    CHECK(certificate_violations(net.topology, cert).empty());
    CHECK(Rational(best.value) <= cert.certified_bound);

    std::mt19937 rng(99);
    for (int n : {6, 9}) {
        auto lat = build_hexagonal(n);
        for (int trial = 0; trial < 60; ++trial) {
            auto s = random_schedule(rng, lat.topology);
            auto c = triangle_state_bound(lat, s);
            REQUIRE(certificate_violations(lat.topology, c).empty());
            CHECK(Rational(s.value()) <= c.certified_bound);
            const long long cov = static_cast<long long>(covered(c));
            CHECK(group_sum(c) <= Rational((3 * cov + 6) / 7));
        }
    }
}

TEST_CASE("backhaul converse values") {
    auto g = wyner_backhaul_scheme(8, 1);
    auto r = backhaul_converse(g.assignment, Rational(1));
    CHECK(r.bound == 6);
    CHECK(r.slack == Rational(0));
    CHECK(r.A_bar.size() == 2);

    for (int K = 4; K <= 30; ++K) {
        MessageAssignment self(K);
        for (int i = 1; i <= K; ++i) self.set(i, {i});
        auto s = backhaul_converse(self, Rational(1));
        CHECK(s.M == 1);
        CHECK(static_cast<int>(s.S.size()) == K);
        CHECK(s.bound == K - ((K - 2) / 3 + 1));
    }
    MessageAssignment eight(8);
    for (int i = 1; i <= 8; ++i) eight.set(i, {i});
    auto e = backhaul_converse(eight, Rational(1));
    CHECK(e.A_bar == V{1, 4, 7});
    CHECK(e.bound == 5);

    CHECK_THROWS_AS(backhaul_converse(g.assignment, Rational(3, 2)), Unsupported);
}

TEST_CASE("backhaul converse tightness on the four-B schemes") {
    for (int B = 1; B <= 3; ++B)
        for (int K : {8 * B, 16 * B, 40 * B}) {
            auto g = wyner_backhaul_scheme(K, B);
            auto r = backhaul_converse(g.assignment, Rational(B));
            const int achieved = static_cast<int>(g.scheme.active.size());
            CHECK(r.bound >= achieved);
            CHECK(r.bound - achieved < 2 * r.M + 1);
        }
}

TEST_CASE("backhaul converse is sound on random assignments") {
    std::mt19937 rng(77);
    const int K = 12;
    auto topo = build_wyner(K);
    for (int trial = 0; trial < 60; ++trial) {
        MessageAssignment a(K);
        int budget = K;
        for (int i = 1; i <= K && budget > 0; ++i) {
            const int size = std::min<int>(budget, static_cast<int>(rng() % 3));
            V s;
            while (static_cast<int>(s.size()) < size) {
                int t = std::clamp(i + static_cast<int>(rng() % 5) - 2, 1, K);
                if (std::find(s.begin(), s.end(), t) == s.end()) s.push_back(t);
            }
            budget -= size;
            a.set(i, s);
        }
        auto r = backhaul_converse(a, Rational(1));
        CHECK(r.bound >= max_zf_with_assignment(topo, a).value);
        V A;
        for (int i = 1; i <= K; ++i)
            if (!std::binary_search(r.A_bar.begin(), r.A_bar.end(), i)) A.push_back(i);
        CHECK(reconstructibility_check(topo, a, A));
    }
}

TEST_CASE("reconstructibility") {
    auto topo = build_wyner(8);
    auto g = wyner_backhaul_scheme(8, 1);
    V all{1, 2, 3, 4, 5, 6, 7, 8};
    CHECK(reconstructibility_check(topo, g.assignment, all));
    CHECK_FALSE(reconstructibility_check(topo, g.assignment, {}));
    auto r = backhaul_converse(g.assignment, Rational(1));
    V A;
    for (int i : all)
        if (!std::binary_search(r.A_bar.begin(), r.A_bar.end(), i)) A.push_back(i);
    CHECK(reconstructibility_check(topo, g.assignment, A));

    // Monotone in A.
    std::mt19937 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        V base;
        for (int i : all)
            if (rng() % 2) base.push_back(i);
        if (!reconstructibility_check(topo, g.assignment, base)) continue;
        V more = base;
        for (int i : all)
            if (!std::binary_search(base.begin(), base.end(), i) && rng() % 2) more.push_back(i);
        std::sort(more.begin(), more.end());
        CHECK(reconstructibility_check(topo, g.assignment, more));
    }
}
