#include "dofnet/assignment.hpp"

#include "dofnet/errors.hpp"

#include <algorithm>
#include <string>

namespace dofnet {

MessageAssignment::MessageAssignment(int K) : K_(K), sets_(K > 0 ? K : 0) {
    if (K < 0) throw InvalidParameter("K must be nonnegative");
}

MessageAssignment::MessageAssignment(int K, std::vector<std::vector<int>> sets)
    : MessageAssignment(K) {
    if (static_cast<int>(sets.size()) != K)
        throw InvalidParameter("transmit_sets must have one entry per message");
    for (int i = 1; i <= K; ++i) set(i, std::move(sets[i - 1]));
}

void MessageAssignment::set(int i, std::vector<int> transmitters) {
    if (i < 1 || i > K_) throw InvalidParameter("message " + std::to_string(i) + " outside [K]");
    std::sort(transmitters.begin(), transmitters.end());
    transmitters.erase(std::unique(transmitters.begin(), transmitters.end()), transmitters.end());
    for (int t : transmitters)
        if (t < 1 || t > K_)
            throw InvalidParameter("transmitter " + std::to_string(t) + " outside [K]");
    sets_[i - 1] = std::move(transmitters);
}

std::size_t MessageAssignment::total_size() const {
    std::size_t n = 0;
    for (const auto& s : sets_) n += s.size();
    return n;
}

std::size_t MessageAssignment::max_size() const {
    std::size_t m = 0;
    for (const auto& s : sets_) m = std::max(m, s.size());
    return m;
}

CooperationMetrics metrics(const MessageAssignment& assignment) {
    CooperationMetrics out;
    const int K = assignment.K();
    if (K == 0) return out;
    std::map<int, std::int64_t> counts;
    for (int i = 1; i <= K; ++i) ++counts[static_cast<int>(assignment.transmit_set(i).size())];
    for (auto [j, c] : counts) out.histogram[j] = Rational(c, K);
    out.M = counts.rbegin()->first;
    out.B = Rational(static_cast<std::int64_t>(assignment.total_size()), K);
    return out;
}

bool check_local_cooperation(const MessageAssignment& assignment, int r) {
    for (int i = 1; i <= assignment.K(); ++i)
        for (int t : assignment.transmit_set(i))
            if (t < i - r || t > i + r) return false;
    return true;
}

MessageAssignment reduce_wyner(const MessageAssignment& assignment, int M) {
    if (M < 1) throw InvalidParameter("M must be positive");
    MessageAssignment out(assignment.K());
    for (int i = 1; i <= assignment.K(); ++i) {
        const auto& t = assignment.transmit_set(i);
        if (static_cast<int>(t.size()) > M)
            throw PreconditionViolation("|T_" + std::to_string(i) + "| exceeds M");
        std::vector<int> kept;
        for (int j : t)
            if (j >= i - M && j <= i + M - 1) kept.push_back(j);
        out.set(i, std::move(kept));
    }
    return out;
}

bool validate_backhaul(const MessageAssignment& assignment, const Rational& B) {
    if (assignment.K() == 0) return true;
    return metrics(assignment).B <= B;
}

}  // namespace dofnet
