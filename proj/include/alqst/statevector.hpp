#ifndef ALQST_STATEVECTOR_HPP
#define ALQST_STATEVECTOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "alqst/basis.hpp"
#include "alqst/random.hpp"

namespace alqst {

// Dense amplitudes over the 2^N computational basis states. Qubit 0 is
// the most significant bit of the basis-state index. Dense storage caps
// N at 20.
struct StateVector {
    int num_qubits = 0;
    Eigen::VectorXcd amplitudes;

    StateVector() = default;
    StateVector(int n, Eigen::VectorXcd amps);
    static StateVector zero_state(int num_qubits);

    Eigen::Index dim() const { return amplitudes.size(); }
};

constexpr int kMaxQubits = 20;

void normalize(StateVector& state);

// In-place application of a 2x2 gate to one qubit of a dense vector.
void apply_single_qubit_gate(Eigen::VectorXcd& amplitudes, int num_qubits,
                             int qubit, const Eigen::Matrix2cd& gate);

StateVector rotate_state(const StateVector& state, const BasisConfig& config,
                         GateFamily family);
StateVector rotate_state(const StateVector& state,
                         const std::vector<Eigen::Matrix2cd>& rotations);

// Born-rule probabilities of the state rotated into `config`.
Eigen::VectorXd measurement_distribution(const StateVector& state,
                                         const BasisConfig& config,
                                         GateFamily family);

std::vector<Snapshot> born_sample(const StateVector& state,
                                  const BasisConfig& config, GateFamily family,
                                  int num_samples, Rng& rng);

// Draws indices from an explicit probability vector by inverse CDF.
std::vector<std::uint64_t> sample_indices(const Eigen::VectorXd& probabilities,
                                          int num_samples, Rng& rng);

double fidelity(const StateVector& a, const StateVector& b);
double rescaled_fidelity(double fidelity_value, int num_qubits);

// Expectation of the total S^z operator; diagnostic for degenerate
// ground spaces.
double total_sz(const StateVector& state);

} // namespace alqst

#endif
