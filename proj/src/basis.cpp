#include "alqst/basis.hpp"

#include <algorithm>
#include <set>

namespace alqst {

using namespace std::complex_literals;

Axis axis_from_char(char c) {
    switch (c) {
    case 'x': return Axis::X;
    case 'y': return Axis::Y;
    case 'z': return Axis::Z;
    default:
        throw std::invalid_argument(std::string("invalid basis axis '") + c +
                                    "', expected one of x, y, z");
    }
}

GateFamily gate_family_from_string(const std::string& name) {
    if (name == "hadamard_k") return GateFamily::HadamardK;
    if (name == "rxy") return GateFamily::RotXY;
    throw std::invalid_argument("unknown gate family '" + name +
                                "', expected hadamard_k or rxy");
}

std::string to_string(GateFamily family) {
    return family == GateFamily::HadamardK ? "hadamard_k" : "rxy";
}

BasisConfig::BasisConfig(std::string axes) : axes_(std::move(axes)) {
    for (char c : axes_) {
        axis_from_char(c);
    }
    if (axes_.empty()) {
        throw std::invalid_argument("empty basis config");
    }
}

BasisConfig BasisConfig::uniform(Axis axis, int num_qubits) {
    return BasisConfig(std::string(num_qubits, static_cast<char>(axis)));
}

std::uint64_t outcome_from_string(const std::string& bits) {
    std::uint64_t value = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(std::string("invalid outcome bit '") + c + "'");
        }
        value = (value << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return value;
}

std::string outcome_to_string(std::uint64_t outcome, int num_qubits) {
    std::string bits(num_qubits, '0');
    for (int q = 0; q < num_qubits; ++q) {
        bits[q] = outcome_bit(outcome, q, num_qubits) ? '1' : '0';
    }
    return bits;
}

void SnapshotPool::add(const Snapshot& s) {
    if (s.config.size() != num_qubits) {
        throw std::invalid_argument("snapshot config length does not match pool qubit count");
    }
    snapshots.push_back(s);
}

void SnapshotPool::add(const SnapshotPool& other) {
    if (other.num_qubits != num_qubits) {
        throw std::invalid_argument("pool qubit counts differ");
    }
    snapshots.insert(snapshots.end(), other.snapshots.begin(), other.snapshots.end());
}

int SnapshotPool::num_configs() const {
    std::set<BasisConfig> configs;
    for (const auto& s : snapshots) {
        configs.insert(s.config);
    }
    return static_cast<int>(configs.size());
}

std::map<BasisConfig, std::vector<std::uint64_t>> SnapshotPool::grouped_by_config() const {
    std::map<BasisConfig, std::vector<std::uint64_t>> grouped;
    for (const auto& s : snapshots) {
        grouped[s.config].push_back(s.outcome);
    }
    return grouped;
}

RotationGate rotation_gate(Axis axis, GateFamily family) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    RotationGate gate;
    gate.axis = axis;
    if (axis == Axis::Z) {
        gate.matrix = Eigen::Matrix2cd::Identity();
        return gate;
    }
    if (family == GateFamily::HadamardK) {
        if (axis == Axis::X) {
            gate.matrix << 1.0, 1.0, 1.0, -1.0;
        } else {
            gate.matrix << 1.0, 1.0, 1.0i, -1.0i;
        }
    } else {
        if (axis == Axis::X) {
            gate.matrix << 1.0i, -1.0i, 1.0, 1.0;
        } else {
            gate.matrix << 1.0, -1.0i, -1.0i, 1.0;
        }
    }
    gate.matrix *= inv_sqrt2;
    return gate;
}

std::vector<Eigen::Matrix2cd> relative_rotations(const BasisConfig& config,
                                                 const BasisConfig& reference,
                                                 GateFamily family) {
    if (config.size() != reference.size()) {
        throw std::invalid_argument("config and reference lengths differ");
    }
    std::vector<Eigen::Matrix2cd> rotations(config.size());
    for (int q = 0; q < config.size(); ++q) {
        if (config.axis(q) == reference.axis(q)) {
            rotations[q] = Eigen::Matrix2cd::Identity();
        } else {
            rotations[q] = rotation_gate(config.axis(q), family).matrix *
                           rotation_gate(reference.axis(q), family).matrix.adjoint();
        }
    }
    return rotations;
}

} // namespace alqst
