#ifndef ALQST_MODELS_HPP
#define ALQST_MODELS_HPP

#include <stdexcept>
#include <string>

#include "alqst/statevector.hpp"

namespace alqst {

enum class NamedState { Ghz, GhzPhi, ZSpins, XSpins };

NamedState named_state_from_string(const std::string& name);
std::string to_string(NamedState kind);

StateVector named_state(NamedState kind, int num_qubits);

// Open-boundary XXZ chain,
//   H = sum_bonds J (Sx Sx + Sy Sy) + J (1 + Delta) Sz Sz.
struct XxzSpec {
    int length = 2;
    double coupling = 1.0;    // J
    double anisotropy = 0.0;  // Delta
};

// Kinetically constrained spin chain,
//   H = t sum_{j=2}^{L-1} (4 Sx_{j-1} Sx_{j+1} - 1) Sz_j
//       - h sum_{j=1}^{L} 2 Sx_j + mu sum_{j=2}^{L} Sx_{j-1} Sx_j.
struct KcsSpec {
    int length = 3;
    double hopping = 1.0;            // t
    double field = 0.0;              // h
    double chemical_potential = 0.0; // mu
};

void validate(const XxzSpec& spec);
void validate(const KcsSpec& spec);

// Matrix-free H*v by term-by-term bit manipulation.
StateVector apply_hamiltonian(const XxzSpec& spec, const StateVector& v);
StateVector apply_hamiltonian(const KcsSpec& spec, const StateVector& v);

// Real-arithmetic kernels; both Hamiltonians are real symmetric in the
// computational basis, so the iterative solver works on real vectors.
void apply_xxz(const XxzSpec& spec, const Eigen::VectorXd& v, Eigen::VectorXd& out);
void apply_kcs(const KcsSpec& spec, const Eigen::VectorXd& v, Eigen::VectorXd& out);

struct GroundStateResult {
    double energy = 0.0;
    StateVector state;
    double residual_norm = 0.0;
    int matvec_count = 0;
};

struct GroundStateOptions {
    double tolerance = 1e-8;
    int max_iterations = 2000;  // matrix-vector product budget
    int krylov_dim = 30;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& message, double best_residual)
        : std::runtime_error(message), best_residual_(best_residual) {}
    double best_residual() const { return best_residual_; }

private:
    double best_residual_;
};

GroundStateResult ground_state(const XxzSpec& spec, const GroundStateOptions& opts, Rng& rng);
GroundStateResult ground_state(const KcsSpec& spec, const GroundStateOptions& opts, Rng& rng);

} // namespace alqst

#endif
