#ifndef ALQST_SOURCE_HPP
#define ALQST_SOURCE_HPP

#include <deque>
#include <map>
#include <memory>

#include "alqst/statevector.hpp"

namespace alqst {

// Where measurement snapshots come from: either Born-rule sampling of a
// known target state, or replay of a recorded snapshot file. Replay
// never re-serves a consumed snapshot.
class MeasurementSource {
public:
    virtual ~MeasurementSource() = default;
    virtual int num_qubits() const = 0;
    virtual std::vector<Snapshot> draw(const BasisConfig& config, int count) = 0;
};

class SimulatorSource final : public MeasurementSource {
public:
    SimulatorSource(StateVector target, GateFamily family, Rng rng);

    int num_qubits() const override { return target_.num_qubits; }
    std::vector<Snapshot> draw(const BasisConfig& config, int count) override;
    const StateVector& target() const { return target_; }

private:
    StateVector target_;
    GateFamily family_;
    Rng rng_;
    std::map<BasisConfig, Eigen::VectorXd> distribution_cache_;
};

class ReplaySource final : public MeasurementSource {
public:
    explicit ReplaySource(const SnapshotPool& pool);

    int num_qubits() const override { return num_qubits_; }
    std::vector<Snapshot> draw(const BasisConfig& config, int count) override;
    std::size_t remaining(const BasisConfig& config) const;

private:
    int num_qubits_;
    std::map<BasisConfig, std::deque<std::uint64_t>> queues_;
};

} // namespace alqst

#endif
