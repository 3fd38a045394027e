#pragma once

#include "dofnet/assignment.hpp"
#include "dofnet/schemes.hpp"
#include "dofnet/topology.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace dofnet {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-8;   // interference, relative to desired
inline constexpr double kDefaultFloor = 1e-6;       // desired magnitude and sampling floor

// H_{i,j} on the topology's support only.
class ChannelRealization {
public:
    ChannelRealization() = default;
    ChannelRealization(const NetworkTopology& topology, std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    // Zero when rx does not hear tx.
    Complex at(int rx, int tx) const;
    void set(int rx, int tx, Complex value);
    std::size_t size() const;
    ChannelRealization scaled(Complex factor) const;

private:
    friend ChannelRealization sample_channels(const NetworkTopology&, std::uint64_t, bool);
    std::uint64_t seed_ = 0;
    std::vector<std::vector<int>> tx_;      // per receiver, sorted
    std::vector<std::vector<Complex>> h_;   // aligned with tx_
};

// Circular standard normal entries (real normal when real_only); entries below the
// floor in magnitude are redrawn.
ChannelRealization sample_channels(const NetworkTopology& topology, std::uint64_t seed,
                                   bool real_only = false);

struct BeamDesign {
    // message -> (transmitter, coefficient), over T_i in ascending transmitter order
    std::map<int, std::vector<std::pair<int, Complex>>> beams;
};

enum class BeamSolver { Substitution, Dense };

BeamDesign design_beams(const NetworkTopology& topology, const ChannelRealization& channels,
                        const MessageAssignment& assignment, const ZfScheme& scheme,
                        BeamSolver solver = BeamSolver::Substitution);

struct ReceiverCheck {
    int rx = 0;
    double desired_mag = 0;
    double max_interf = 0;
};

struct VerificationReport {
    bool pass = true;
    int dof = 0;               // active receivers that pass
    double max_residual = 0;   // largest interference / desired ratio
    std::vector<ReceiverCheck> per_receiver;
};

VerificationReport verify(const NetworkTopology& topology, const ChannelRealization& channels,
                          const ZfScheme& scheme, const BeamDesign& beams,
                          double tol = kDefaultTolerance, double floor = kDefaultFloor);

}  // namespace dofnet
