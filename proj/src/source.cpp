#include "alqst/source.hpp"

namespace alqst {

SimulatorSource::SimulatorSource(StateVector target, GateFamily family, Rng rng)
    : target_(std::move(target)), family_(family), rng_(rng) {}

std::vector<Snapshot> SimulatorSource::draw(const BasisConfig& config, int count) {
    if (config.size() != target_.num_qubits) {
        throw std::invalid_argument("config length does not match source qubit count");
    }
    auto it = distribution_cache_.find(config);
    if (it == distribution_cache_.end()) {
        it = distribution_cache_
                 .emplace(config, measurement_distribution(target_, config, family_))
                 .first;
    }
    std::vector<Snapshot> snapshots;
    snapshots.reserve(count);
    for (std::uint64_t index : sample_indices(it->second, count, rng_)) {
        snapshots.push_back(Snapshot{config, index});
    }
    return snapshots;
}

ReplaySource::ReplaySource(const SnapshotPool& pool) : num_qubits_(pool.num_qubits) {
    for (const auto& snapshot : pool.snapshots) {
        queues_[snapshot.config].push_back(snapshot.outcome);
    }
}

std::vector<Snapshot> ReplaySource::draw(const BasisConfig& config, int count) {
    auto it = queues_.find(config);
    if (it == queues_.end() || static_cast<int>(it->second.size()) < count) {
        const std::size_t available = it == queues_.end() ? 0 : it->second.size();
        throw std::runtime_error("replay source exhausted for config " + config.str() +
                                 ": requested " + std::to_string(count) + ", have " +
                                 std::to_string(available));
    }
    std::vector<Snapshot> snapshots;
    snapshots.reserve(count);
    for (int i = 0; i < count; ++i) {
        snapshots.push_back(Snapshot{config, it->second.front()});
        it->second.pop_front();
    }
    return snapshots;
}

std::size_t ReplaySource::remaining(const BasisConfig& config) const {
    auto it = queues_.find(config);
    return it == queues_.end() ? 0 : it->second.size();
}

} // namespace alqst
