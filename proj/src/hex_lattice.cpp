#include "dofnet/hex_lattice.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>

namespace dofnet {

Coset coset_of(Eisenstein z) {
    int f = (z.a + z.b) % 3;
    if (f < 0) f += 3;
    return static_cast<Coset>(f);
}

std::string coset_name(Coset c) {
    switch (c) {
    case Coset::Square: return "square";
    case Coset::Circle: return "circle";
    case Coset::Diamond: return "diamond";
    }
    return "square";
}

Coset parse_coset(const std::string& name) {
    for (auto c : {Coset::Square, Coset::Circle, Coset::Diamond})
        if (coset_name(c) == name) return c;
    throw InvalidParameter("unknown coset '" + name + "'");
}

HexLattice::HexLattice(std::vector<Eisenstein> nodes, int n) : n_(n), nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end(), [](Eisenstein x, Eisenstein y) {
        return x.b != y.b ? x.b < y.b : x.a < y.a;
    });
    for (int i = 0; i < size(); ++i) {
        if (!index_.emplace(nodes_[i], i + 1).second)
            throw InvalidParameter("duplicate lattice node");
    }
}

std::optional<int> HexLattice::index_of(Eisenstein z) const {
    auto it = index_.find(z);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<Triangle> HexLattice::delta(Eisenstein z) const {
    auto p = index_of(z), q = index_of(z + kOmega), r = index_of(z + kOmega + kOne);
    if (!p || !q || !r) return std::nullopt;
    return Triangle{*p, *q, *r};
}

namespace {

// The three anchors z with v in Delta(z); cosets f(v), f(v)-1, f(v)-2.
std::array<Eisenstein, 3> anchors_of(Eisenstein v) {
    return {v, v - kOmega, v - kOmega - kOne};
}

Eisenstein anchor_with_coset(Eisenstein v, Coset c) {
    for (auto z : anchors_of(v))
        if (coset_of(z) == c) return z;
    return v;  // unreachable: the three anchors cover all cosets
}

}  // namespace

HexNetwork build_hexagonal_from(std::vector<Eisenstein> nodes, int n) {
    HexLattice lattice(std::move(nodes), n);
    const int K = lattice.size();
    if (K < 1) throw InvalidParameter("empty lattice");
    std::vector<std::vector<int>> hears(K);
    for (int v = 1; v <= K; ++v) {
        const Eisenstein z0 = lattice.coords(v);
        hears[v - 1].push_back(v);
        for (auto z : anchors_of(z0)) {
            if (coset_of(z) == Coset::Square) continue;
            for (auto w : {z, z + kOmega, z + kOmega + kOne}) {
                if (w == z0) continue;
                if (auto u = lattice.index_of(w)) hears[v - 1].push_back(*u);
            }
        }
    }
    NetworkTopology topo(TopologyKind::Hexagonal, K, std::move(hears), n);
    return HexNetwork{std::move(lattice), std::move(topo)};
}

HexNetwork build_hexagonal(int n) {
    if (n < 2) throw InvalidParameter("hexagonal side n must be at least 2");
    std::vector<Eisenstein> nodes;
    nodes.reserve(static_cast<std::size_t>(n) * n);
    for (int b = 0; b < n; ++b) {
        const int first = (b + 1) / 2;
        for (int a = first; a < first + n; ++a) nodes.push_back({a, b});
    }
    return build_hexagonal_from(std::move(nodes), n);
}

std::vector<Triangle> main_triangles(const HexLattice& lattice) {
    std::vector<Triangle> out;
    for (int v = 1; v <= lattice.size(); ++v) {
        if (lattice.coset(v) != Coset::Circle) continue;
        if (auto t = lattice.delta(lattice.coords(v))) out.push_back(*t);
    }
    return out;
}

std::optional<Triangle> main_triangle_of(const HexLattice& lattice, int node) {
    return lattice.delta(anchor_with_coset(lattice.coords(node), Coset::Circle));
}

std::optional<Triangle> middle_triangle(const HexLattice& lattice, int node) {
    return lattice.delta(anchor_with_coset(lattice.coords(node), Coset::Diamond));
}

}  // namespace dofnet
