#pragma once

#include "dofnet/rational.hpp"

#include <map>
#include <vector>

namespace dofnet {

// Transmit set T_i per message i in 1..K. Sets are kept sorted and unique.
class MessageAssignment {
public:
    explicit MessageAssignment(int K = 0);
    MessageAssignment(int K, std::vector<std::vector<int>> sets);

    int K() const { return K_; }
    const std::vector<int>& transmit_set(int i) const { return sets_[i - 1]; }
    void set(int i, std::vector<int> transmitters);
    std::size_t total_size() const;
    std::size_t max_size() const;

    friend bool operator==(const MessageAssignment&, const MessageAssignment&) = default;

private:
    int K_;
    std::vector<std::vector<int>> sets_;
};

struct CooperationMetrics {
    int M = 0;
    Rational B;
    // |T_i| -> fraction of messages; only nonzero entries.
    std::map<int, Rational> histogram;
};

CooperationMetrics metrics(const MessageAssignment& assignment);
bool check_local_cooperation(const MessageAssignment& assignment, int r);
// Drops transmitters outside {i-M, ..., i+M-1}. Throws PreconditionViolation if some |T_i| > M.
MessageAssignment reduce_wyner(const MessageAssignment& assignment, int M);
bool validate_backhaul(const MessageAssignment& assignment, const Rational& B);

}  // namespace dofnet
