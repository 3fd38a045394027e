#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dofnet {

enum class TopologyKind { Wyner, LocallyConnected, TwoDim, Hexagonal, Custom };

std::string kind_name(TopologyKind kind);
TopologyKind parse_kind(const std::string& name);

// Binary support of the channel matrix: receiver i hears transmitter j iff
// H_{i,j} is not identically zero. Indices are 1..K.
class NetworkTopology {
public:
    // param is L for LocallyConnected and the side n for TwoDim/Hexagonal.
    NetworkTopology(TopologyKind kind, int K, std::vector<std::vector<int>> hears, int param = 0);

    TopologyKind kind() const { return kind_; }
    int K() const { return K_; }
    int param() const { return param_; }

    // Sorted transmitters heard at receiver rx.
    const std::vector<int>& hears(int rx) const { return hears_[rx - 1]; }
    // Sorted receivers at which transmitter tx is heard.
    const std::vector<int>& heard_at(int tx) const { return heard_at_[tx - 1]; }
    bool hears(int rx, int tx) const;

    std::size_t link_count() const;

    // Copy with one cross link removed; kind becomes Custom.
    NetworkTopology without_link(int rx, int tx) const;

private:
    TopologyKind kind_;
    int K_;
    int param_;
    std::vector<std::vector<int>> hears_;
    std::vector<std::vector<int>> heard_at_;
};

NetworkTopology build_wyner(int K);
NetworkTopology build_locally_connected(int K, int L);
NetworkTopology build_two_dim(int K);

// Integer square root when K is a perfect square, otherwise -1.
int exact_sqrt(long long K);

}  // namespace dofnet
