#pragma once

#include "dofnet/topology.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dofnet {

// z = a + b*omega with omega = (-1 + i*sqrt(3))/2.
struct Eisenstein {
    int a = 0;
    int b = 0;
    friend Eisenstein operator+(Eisenstein x, Eisenstein y) { return {x.a + y.a, x.b + y.b}; }
    friend Eisenstein operator-(Eisenstein x, Eisenstein y) { return {x.a - y.a, x.b - y.b}; }
    friend auto operator<=>(const Eisenstein&, const Eisenstein&) = default;
};

inline constexpr Eisenstein kOmega{0, 1};
inline constexpr Eisenstein kOne{1, 0};

enum class Coset { Square = 0, Circle = 1, Diamond = 2 };

Coset coset_of(Eisenstein z);
std::string coset_name(Coset c);
Coset parse_coset(const std::string& name);

// Twice the real part, 2a - b; exact for tie-breaking.
inline int twice_real_part(Eisenstein z) { return 2 * z.a - z.b; }

using Triangle = std::array<int, 3>;

// Finite set of Eisenstein integers, indexed 1..size() row-major over (b, a).
class HexLattice {
public:
    // n is informational (0 for arbitrary node sets).
    explicit HexLattice(std::vector<Eisenstein> nodes, int n = 0);

    int n() const { return n_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    Eisenstein coords(int node) const { return nodes_[node - 1]; }
    Coset coset(int node) const { return coset_of(nodes_[node - 1]); }
    std::optional<int> index_of(Eisenstein z) const;
    const std::vector<Eisenstein>& nodes() const { return nodes_; }

    // Node indices of Delta(z) = (z, z+omega, z+omega+1), or nullopt if any is missing.
    std::optional<Triangle> delta(Eisenstein z) const;

private:
    int n_;
    std::vector<Eisenstein> nodes_;
    std::map<Eisenstein, int> index_;
};

struct HexNetwork {
    HexLattice lattice;
    NetworkTopology topology;
};

// n rows b = 0..n-1, row b holding a = ceil(b/2) .. ceil(b/2)+n-1.
HexNetwork build_hexagonal(int n);
// Induced sector graph on an arbitrary node set.
HexNetwork build_hexagonal_from(std::vector<Eisenstein> nodes, int n = 0);

// Delta(z) for circle z, all three nodes present; sorted by anchor index.
std::vector<Triangle> main_triangles(const HexLattice& lattice);
std::optional<Triangle> main_triangle_of(const HexLattice& lattice, int node);
// nullopt is the boundary marker.
std::optional<Triangle> middle_triangle(const HexLattice& lattice, int node);

}  // namespace dofnet
