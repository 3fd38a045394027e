#include "dofnet/topology.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dofnet {

std::string kind_name(TopologyKind kind) {
    switch (kind) {
    case TopologyKind::Wyner: return "wyner";
    case TopologyKind::LocallyConnected: return "locally_connected";
    case TopologyKind::TwoDim: return "two_dim";
    case TopologyKind::Hexagonal: return "hexagonal";
    case TopologyKind::Custom: return "custom";
    }
    return "custom";
}

TopologyKind parse_kind(const std::string& name) {
    for (auto k : {TopologyKind::Wyner, TopologyKind::LocallyConnected, TopologyKind::TwoDim,
                   TopologyKind::Hexagonal, TopologyKind::Custom})
        if (kind_name(k) == name) return k;
    throw InvalidParameter("unknown topology kind '" + name + "'");
}

NetworkTopology::NetworkTopology(TopologyKind kind, int K, std::vector<std::vector<int>> hears,
                                 int param)
    : kind_(kind), K_(K), param_(param), hears_(std::move(hears)) {
    if (K < 1) throw InvalidParameter("K must be positive");
    if (static_cast<int>(hears_.size()) != K)
        throw InvalidParameter("hears must list one set per receiver");
    heard_at_.assign(K, {});
    for (int rx = 1; rx <= K; ++rx) {
        auto& h = hears_[rx - 1];
        std::sort(h.begin(), h.end());
        h.erase(std::unique(h.begin(), h.end()), h.end());
        for (int tx : h) {
            if (tx < 1 || tx > K)
                throw InvalidParameter("transmitter " + std::to_string(tx) + " outside [K]");
            heard_at_[tx - 1].push_back(rx);
        }
        if (!std::binary_search(h.begin(), h.end(), rx))
            throw InvalidParameter("receiver " + std::to_string(rx) + " lacks its direct link");
    }
}

bool NetworkTopology::hears(int rx, int tx) const {
    const auto& h = hears_[rx - 1];
    return std::binary_search(h.begin(), h.end(), tx);
}

std::size_t NetworkTopology::link_count() const {
    std::size_t n = 0;
    for (const auto& h : hears_) n += h.size();
    return n;
}

NetworkTopology NetworkTopology::without_link(int rx, int tx) const {
    if (rx == tx) throw InvalidParameter("direct links cannot be removed");
    auto h = hears_;
    auto& row = h[rx - 1];
    row.erase(std::remove(row.begin(), row.end(), tx), row.end());
    return NetworkTopology(TopologyKind::Custom, K_, std::move(h), 0);
}

NetworkTopology build_wyner(int K) {
    if (K < 1) throw InvalidParameter("K must be positive");
    std::vector<std::vector<int>> hears(K);
    for (int i = 1; i <= K; ++i) {
        if (i > 1) hears[i - 1].push_back(i - 1);
        hears[i - 1].push_back(i);
    }
    return NetworkTopology(TopologyKind::Wyner, K, std::move(hears), 1);
}

NetworkTopology build_locally_connected(int K, int L) {
    if (K < 1) throw InvalidParameter("K must be positive");
    if (L < 0) throw InvalidParameter("L must be nonnegative");
    // j - floor(L/2) <= i <= j + ceil(L/2)  <=>  i - ceil(L/2) <= j <= i + floor(L/2)
    const int below = (L + 1) / 2;
    const int above = L / 2;
    std::vector<std::vector<int>> hears(K);
    for (int i = 1; i <= K; ++i)
        for (int j = std::max(1, i - below); j <= std::min(K, i + above); ++j)
            hears[i - 1].push_back(j);
    return NetworkTopology(TopologyKind::LocallyConnected, K, std::move(hears), L);
}

int exact_sqrt(long long K) {
    if (K < 0) return -1;
    long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(K))));
    while (r * r > K) --r;
    while ((r + 1) * (r + 1) <= K) ++r;
    return r * r == K ? static_cast<int>(r) : -1;
}

NetworkTopology build_two_dim(int K) {
    const int n = exact_sqrt(K);
    if (K < 1 || n < 0) throw InvalidParameter("two-dimensional model needs a perfect square K");
    std::vector<std::vector<int>> hears(K);
    for (int j = 1; j <= K; ++j) {
        const bool row_end = (j % n) == 0;
        auto link = [&](int rx) {
            if (rx <= K) hears[rx - 1].push_back(j);
        };
        link(j);
        link(j + n);
        if (!row_end) {
            link(j + 1);
            link(j + n + 1);
        }
    }
    return NetworkTopology(TopologyKind::TwoDim, K, std::move(hears), n);
}

}  // namespace dofnet
