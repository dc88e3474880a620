#include "alqst/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace alqst {

StateVector::StateVector(int n, Eigen::VectorXcd amps)
    : num_qubits(n), amplitudes(std::move(amps)) {
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, 20]");
    }
    if (amplitudes.size() != (Eigen::Index{1} << n)) {
        throw std::invalid_argument("amplitude vector length must be 2^N");
    }
}

StateVector StateVector::zero_state(int num_qubits) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
    amps[0] = 1.0;
    return StateVector(num_qubits, std::move(amps));
}

void normalize(StateVector& state) {
    const double norm = state.amplitudes.norm();
    if (norm == 0.0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    state.amplitudes /= norm;
}

void apply_single_qubit_gate(Eigen::VectorXcd& amplitudes, int num_qubits,
                             int qubit, const Eigen::Matrix2cd& gate) {
    const Eigen::Index dim = amplitudes.size();
    const Eigen::Index stride = Eigen::Index{1} << (num_qubits - 1 - qubit);
    const std::complex<double> g00 = gate(0, 0), g01 = gate(0, 1);
    const std::complex<double> g10 = gate(1, 0), g11 = gate(1, 1);
    for (Eigen::Index block = 0; block < dim; block += 2 * stride) {
        for (Eigen::Index offset = 0; offset < stride; ++offset) {
            const Eigen::Index i0 = block + offset;
            const Eigen::Index i1 = i0 + stride;
            const std::complex<double> a0 = amplitudes[i0];
            const std::complex<double> a1 = amplitudes[i1];
            amplitudes[i0] = g00 * a0 + g01 * a1;
            amplitudes[i1] = g10 * a0 + g11 * a1;
        }
    }
}

StateVector rotate_state(const StateVector& state, const BasisConfig& config,
                         GateFamily family) {
    if (config.size() != state.num_qubits) {
        throw std::invalid_argument("config length does not match qubit count");
    }
    StateVector rotated = state;
    for (int q = 0; q < state.num_qubits; ++q) {
        if (config.axis(q) == Axis::Z) {
            continue;
        }
        apply_single_qubit_gate(rotated.amplitudes, state.num_qubits, q,
                                rotation_gate(config.axis(q), family).matrix);
    }
    return rotated;
}

StateVector rotate_state(const StateVector& state,
                         const std::vector<Eigen::Matrix2cd>& rotations) {
    if (static_cast<int>(rotations.size()) != state.num_qubits) {
        throw std::invalid_argument("rotation count does not match qubit count");
    }
    StateVector rotated = state;
    for (int q = 0; q < state.num_qubits; ++q) {
        if (rotations[q].isIdentity(0.0)) {
            continue;
        }
        apply_single_qubit_gate(rotated.amplitudes, state.num_qubits, q, rotations[q]);
    }
    return rotated;
}

Eigen::VectorXd measurement_distribution(const StateVector& state,
                                         const BasisConfig& config,
                                         GateFamily family) {
    return rotate_state(state, config, family).amplitudes.cwiseAbs2();
}

std::vector<std::uint64_t> sample_indices(const Eigen::VectorXd& probabilities,
                                          int num_samples, Rng& rng) {
    Eigen::VectorXd cdf(probabilities.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> indices(num_samples);
    for (int s = 0; s < num_samples; ++s) {
        const double u = uniform_unit(rng) * acc;
        const double* begin = cdf.data();
        const double* end = cdf.data() + cdf.size();
        const double* it = std::lower_bound(begin, end, u);
        indices[s] = static_cast<std::uint64_t>(it == end ? cdf.size() - 1 : it - begin);
    }
    return indices;
}

std::vector<Snapshot> born_sample(const StateVector& state,
                                  const BasisConfig& config, GateFamily family,
                                  int num_samples, Rng& rng) {
    if (num_samples < 1) {
        throw std::invalid_argument("sample count must be >= 1");
    }
    const Eigen::VectorXd probs = measurement_distribution(state, config, family);
    std::vector<Snapshot> snapshots;
    snapshots.reserve(num_samples);
    for (std::uint64_t index : sample_indices(probs, num_samples, rng)) {
        snapshots.push_back(Snapshot{config, index});
    }
    return snapshots;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.num_qubits != b.num_qubits) {
        throw std::invalid_argument("fidelity requires equal qubit counts");
    }
    return std::norm(a.amplitudes.dot(b.amplitudes));
}

double rescaled_fidelity(double fidelity_value, int num_qubits) {
    return std::pow(fidelity_value, 1.0 / num_qubits);
}

double total_sz(const StateVector& state) {
    double value = 0.0;
    const int n = state.num_qubits;
    for (Eigen::Index x = 0; x < state.dim(); ++x) {
        const double weight = std::norm(state.amplitudes[x]);
        if (weight == 0.0) {
            continue;
        }
        double sz = 0.0;
        for (int q = 0; q < n; ++q) {
            sz += outcome_bit(x, q, n) ? -0.5 : 0.5;
        }
        value += weight * sz;
    }
    return value;
}

} // namespace alqst
