#include "dofnet/zf_engine.hpp"

#include "dofnet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace dofnet {

ChannelRealization::ChannelRealization(const NetworkTopology& topology, std::uint64_t seed)
    : seed_(seed), tx_(topology.K()), h_(topology.K()) {
    for (int rx = 1; rx <= topology.K(); ++rx) {
        tx_[rx - 1] = topology.hears(rx);
        h_[rx - 1].assign(tx_[rx - 1].size(), Complex(1.0, 0.0));
    }
}

Complex ChannelRealization::at(int rx, int tx) const {
    const auto& row = tx_[rx - 1];
    auto it = std::lower_bound(row.begin(), row.end(), tx);
    if (it == row.end() || *it != tx) return {};
    return h_[rx - 1][it - row.begin()];
}

void ChannelRealization::set(int rx, int tx, Complex value) {
    const auto& row = tx_[rx - 1];
    auto it = std::lower_bound(row.begin(), row.end(), tx);
    if (it == row.end() || *it != tx)
        throw InvalidParameter("no link from transmitter " + std::to_string(tx) + " to receiver " +
                               std::to_string(rx));
    h_[rx - 1][it - row.begin()] = value;
}

std::size_t ChannelRealization::size() const {
    std::size_t n = 0;
    for (const auto& row : tx_) n += row.size();
    return n;
}

ChannelRealization ChannelRealization::scaled(Complex factor) const {
    ChannelRealization out = *this;
    for (auto& row : out.h_)
        for (auto& h : row) h *= factor;
    return out;
}

ChannelRealization sample_channels(const NetworkTopology& topology, std::uint64_t seed, bool real_only) {
    ChannelRealization ch(topology, seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = real_only ? 1.0 : 1.0 / std::sqrt(2.0);
    for (auto& row : ch.h_)
        for (auto& h : row) {
            do {
                const double re = normal(rng);
                const double im = real_only ? 0.0 : normal(rng);
                h = Complex(re, im) * scale;
            } while (std::abs(h) < kDefaultFloor);
        }
    return ch;
}

namespace {

using Beam = std::vector<std::pair<int, Complex>>;

// v[serving] = 1; zero sum_t H[c][t] v[t] for c in C. Returns false when some
// constraint never reduces to a single unknown.
bool solve_by_substitution(const ChannelRealization& ch, const std::vector<int>& T, int serving,
                           const std::vector<int>& C, int message, Beam& out) {
    const std::size_t n = T.size();
    std::vector<Complex> v(n);
    std::vector<char> known(n, 0);
    for (std::size_t k = 0; k < n; ++k)
        if (T[k] == serving) {
            v[k] = 1.0;
            known[k] = 1;
        }
    std::vector<char> done(C.size(), 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t r = 0; r < C.size() && !progress; ++r) {
            if (done[r]) continue;
            int unknown = -1, count = 0;
            Complex sum = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const Complex h = ch.at(C[r], T[k]);
                if (h == Complex{}) continue;
                if (known[k]) sum += h * v[k];
                else {
                    ++count;
                    unknown = static_cast<int>(k);
                }
            }
            if (count > 1) continue;
            done[r] = 1;
            progress = true;
            if (count == 0) {
                if (std::abs(sum) > 1e-9) throw SolverFailure(message, "overdetermined cancellation");
                continue;
            }
            const Complex pivot = ch.at(C[r], T[unknown]);
            v[unknown] = -sum / pivot;
            known[unknown] = 1;
        }
    }
    if (std::find(done.begin(), done.end(), 0) != done.end()) return false;
    out.clear();
    for (std::size_t k = 0; k < n; ++k) out.emplace_back(T[k], known[k] ? v[k] : Complex{});
    return true;
}

Beam solve_dense(const ChannelRealization& ch, const std::vector<int>& T, int serving,
                 const std::vector<int>& C, int message) {
    std::vector<int> free;
    for (int t : T)
        if (t != serving) free.push_back(t);
    Beam out;
    if (C.empty() || free.empty()) {
        for (int t : T) out.emplace_back(t, t == serving ? Complex(1.0) : Complex{});
        if (!C.empty()) {
            for (int c : C)
                if (std::abs(ch.at(c, serving)) > 0)
                    throw SolverFailure(message, "no free coefficient to cancel interference");
        }
        return out;
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(C.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        b(r) = -ch.at(C[r], serving);
        for (Eigen::Index k = 0; k < cols; ++k) A(r, k) = ch.at(C[r], free[k]);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
    Eigen::VectorXcd x = cod.solve(b);
    if ((A * x - b).norm() > 1e-9 * std::max(1.0, b.norm()))
        throw SolverFailure(message, "singular cancellation system");
    std::size_t k = 0;
    for (int t : T) out.emplace_back(t, t == serving ? Complex(1.0) : x(static_cast<Eigen::Index>(k++)));
    return out;
}

}  // namespace

BeamDesign design_beams(const NetworkTopology& topology, const ChannelRealization& channels,
                        const MessageAssignment& assignment, const ZfScheme& scheme, BeamSolver solver) {
    if (scheme.K != topology.K() || assignment.K() != topology.K())
        throw PreconditionViolation("K mismatch between topology, assignment and scheme");
    BeamDesign design;
    static const std::vector<int> none;
    for (int i : scheme.active) {
        const auto& T = assignment.transmit_set(i);
        auto s = scheme.serving.find(i);
        if (s == scheme.serving.end() || !std::binary_search(T.begin(), T.end(), s->second))
            throw PreconditionViolation("message " + std::to_string(i) + " has no serving transmitter in T_i");
        auto c = scheme.cancel_at.find(i);
        const auto& C = c == scheme.cancel_at.end() ? none : c->second;
        if (C.size() + 1 > T.size())
            throw PreconditionViolation("message " + std::to_string(i) + ": |C_i| > |T_i| - 1");
        Beam beam;
        if (solver == BeamSolver::Dense || !solve_by_substitution(channels, T, s->second, C, i, beam))
            beam = solve_dense(channels, T, s->second, C, i);
        design.beams[i] = std::move(beam);
    }
    return design;
}

VerificationReport verify(const NetworkTopology& topology, const ChannelRealization& channels,
                          const ZfScheme& scheme, const BeamDesign& beams, double tol, double floor) {
    VerificationReport rep;
    const int K = topology.K();
    std::vector<char> on(K + 1, 0);
    for (int i : scheme.active) on[i] = 1;
    // received coefficient of message m at receiver k, as (m, value) contributions
    std::vector<std::vector<std::pair<int, Complex>>> rx(K + 1);
    for (const auto& [m, beam] : beams.beams) {
        if (m < 1 || m > K || !on[m]) continue;
        for (const auto& [t, v] : beam)
            for (int k : topology.heard_at(t))
                if (on[k]) rx[k].emplace_back(m, channels.at(k, t) * v);
    }
    for (int k : scheme.active) {
        auto& contrib = rx[k];
        std::sort(contrib.begin(), contrib.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        ReceiverCheck chk;
        chk.rx = k;
        for (std::size_t a = 0; a < contrib.size();) {
            Complex sum = 0;
            std::size_t b = a;
            for (; b < contrib.size() && contrib[b].first == contrib[a].first; ++b) sum += contrib[b].second;
            if (contrib[a].first == k) chk.desired_mag = std::abs(sum);
            else chk.max_interf = std::max(chk.max_interf, std::abs(sum));
            a = b;
        }
        const bool ok = chk.desired_mag > floor && chk.max_interf < tol * chk.desired_mag;
        const double residual = chk.max_interf / std::max(chk.desired_mag, floor);
        rep.max_residual = std::max(rep.max_residual, residual);
        if (ok) ++rep.dof;
        else rep.pass = false;
        rep.per_receiver.push_back(chk);
    }
    return rep;
}

}  // namespace dofnet
