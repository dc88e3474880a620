#ifndef ALQST_BASIS_HPP
#define ALQST_BASIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace alqst {

enum class Axis : char { X = 'x', Y = 'y', Z = 'z' };

// Which pair of single-qubit rotations realizes the x/y measurement
// bases. HadamardK is the qubit-platform pair (H and K = S-adjoint
// combination), RotXY the pair used for the spin-chain states.
enum class GateFamily { HadamardK, RotXY };

Axis axis_from_char(char c);
GateFamily gate_family_from_string(const std::string& name);
std::string to_string(GateFamily family);

// Per-qubit measurement axes, e.g. "xzzxx". Canonical text form is the
// lowercase concatenation.
class BasisConfig {
public:
    BasisConfig() = default;
    explicit BasisConfig(std::string axes);
    static BasisConfig uniform(Axis axis, int num_qubits);

    int size() const { return static_cast<int>(axes_.size()); }
    Axis axis(int qubit) const { return static_cast<Axis>(axes_[qubit]); }
    const std::string& str() const { return axes_; }

    bool operator==(const BasisConfig& other) const { return axes_ == other.axes_; }
    bool operator!=(const BasisConfig& other) const { return axes_ != other.axes_; }
    bool operator<(const BasisConfig& other) const { return axes_ < other.axes_; }

private:
    std::string axes_;
};

// One projective measurement outcome. Outcome bits are packed into an
// index with qubit 0 as the most significant bit, matching the
// left-to-right reading of config and outcome strings.
struct Snapshot {
    BasisConfig config;
    std::uint64_t outcome = 0;
};

std::uint64_t outcome_from_string(const std::string& bits);
std::string outcome_to_string(std::uint64_t outcome, int num_qubits);
inline int outcome_bit(std::uint64_t outcome, int qubit, int num_qubits) {
    return static_cast<int>((outcome >> (num_qubits - 1 - qubit)) & 1u);
}

// The measurement dataset: snapshots over possibly many configs.
struct SnapshotPool {
    int num_qubits = 0;
    std::vector<Snapshot> snapshots;

    std::size_t size() const { return snapshots.size(); }
    void add(const Snapshot& s);
    void add(const SnapshotPool& other);
    int num_configs() const;
    std::map<BasisConfig, std::vector<std::uint64_t>> grouped_by_config() const;
};

// Measurement-basis rotation for one qubit: apply `matrix` to the ket,
// then read out in the computational basis. Axis z is the identity.
struct RotationGate {
    Axis axis = Axis::Z;
    Eigen::Matrix2cd matrix;
};

RotationGate rotation_gate(Axis axis, GateFamily family);

// Per-qubit rotations that express measuring `config` on a state whose
// amplitudes are stored in the `reference` basis: U_j = R(config_j) *
// R(reference_j)^dagger, the identity wherever the axes agree.
std::vector<Eigen::Matrix2cd> relative_rotations(const BasisConfig& config,
                                                 const BasisConfig& reference,
                                                 GateFamily family);

} // namespace alqst

#endif
