#ifndef ALQST_RBM_HPP
#define ALQST_RBM_HPP

#include <functional>
#include <map>

#include "alqst/basis.hpp"
#include "alqst/statevector.hpp"

namespace alqst {

// Weights of one binary-unit restricted Boltzmann machine. Rows of
// `weights` index hidden units, columns visible units.
struct RbmParams {
    Eigen::MatrixXd weights;
    Eigen::VectorXd visible_bias;
    Eigen::VectorXd hidden_bias;

    int num_visible() const { return static_cast<int>(visible_bias.size()); }
    int num_hidden() const { return static_cast<int>(hidden_bias.size()); }

    static RbmParams zeros(int num_visible, int num_hidden);
    void setZero();
};

RbmParams random_params(int num_visible, int num_hidden, double scale, Rng& rng);

// Two-network wavefunction: the amplitude machine fixes |psi|^2, the
// phase machine fixes arg psi through its log-probability.
struct ComplexRbmWavefunction {
    RbmParams amplitude;  // lambda
    RbmParams phase;      // mu

    int num_qubits() const { return amplitude.num_visible(); }
};

ComplexRbmWavefunction random_wavefunction(int num_qubits, int num_hidden,
                                           double scale, Rng& rng);

double default_init_scale(int num_qubits);

struct TrainConfig {
    int epochs = 1000;
    double learning_rate = 0.07;
    int cd_steps = 100;
    int batch_size = 100;
    double init_scale = 0.0;  // 0 resolves to default_init_scale(N)
    std::uint64_t seed = 0;
};

void validate(const TrainConfig& cfg);

// log of the hidden-marginalized unnormalized probability,
//   log p~(v) = b.v + sum_i softplus(w_i.v + c_i)
double log_unnormalized_prob(const RbmParams& params, std::uint64_t visible);
double unnormalized_prob(const RbmParams& params, std::uint64_t visible);

// Sum of p~ over all 2^V visible configurations; V <= 20.
double partition_exact(const RbmParams& params);
double log_partition_exact(const RbmParams& params);

// sqrt(p_lambda(x)/Z) * exp(i theta_mu(x)/2) with theta = log p~_mu.
std::complex<double> psi(const ComplexRbmWavefunction& wf, std::uint64_t x,
                         double z_lambda);

// Amplitude of `outcome` after rotating the wavefunction by per-qubit
// unitaries. The sum runs over the visible configurations that differ on
// the rotated qubits only; identity qubits contribute single factors.
std::complex<double> rotated_psi(const ComplexRbmWavefunction& wf,
                                 const std::vector<Eigen::Matrix2cd>& rotations,
                                 std::uint64_t outcome, double z_lambda);
// Convenience form with config axes relative to an all-z reference.
std::complex<double> rotated_psi(const ComplexRbmWavefunction& wf,
                                 const BasisConfig& config, std::uint64_t outcome,
                                 GateFamily family, double z_lambda);

// Dense normalized vector of psi over all basis states, in the frame the
// wavefunction was trained in.
StateVector rbm_to_statevector(const ComplexRbmWavefunction& wf);

// Block Gibbs chain: h ~ p(h|v), v ~ p(v|h), k times, starting from the
// rows of `batch` (entries 0/1). Returns the final visible batch.
Eigen::MatrixXd cd_negative_samples(const RbmParams& params,
                                    const Eigen::MatrixXd& batch, int k, Rng& rng);

// Gradients laid out like the parameters they belong to.
struct WavefunctionGradient {
    RbmParams amplitude;
    RbmParams phase;
};

enum class ModelTerm {
    CdChain,          // log Z gradient from CD-k negatives
    ExactEnumeration  // exact model expectation, for oracle checks
};

// Snapshots of one config prepared for gradient evaluation.
struct PreparedConfig {
    std::vector<Eigen::Matrix2cd> rotations;
    std::vector<int> rotated_qubits;
    bool is_reference = false;
};

PreparedConfig prepare_config(const BasisConfig& config, const BasisConfig& reference,
                              GateFamily family);

struct BatchItem {
    const PreparedConfig* config = nullptr;
    std::uint64_t outcome = 0;
};

// Negative-log-likelihood gradient of the pool under the rotated Born
// probabilities, averaged over the snapshots. Reference-basis snapshots
// touch only the amplitude machine; rotated snapshots drive both.
WavefunctionGradient gradient(const ComplexRbmWavefunction& wf,
                              const std::vector<BatchItem>& batch,
                              int cd_steps, Rng& rng,
                              ModelTerm model_term = ModelTerm::CdChain);

struct EpochInfo {
    int epoch = 0;  // 1-based, after the update pass
    const ComplexRbmWavefunction* wavefunction = nullptr;
};

using EpochCallback = std::function<void(const EpochInfo&)>;

// Minibatch gradient descent against a snapshot pool. Deterministic for
// a given seed. The callback runs after every epoch.
ComplexRbmWavefunction train(ComplexRbmWavefunction wf, const SnapshotPool& pool,
                             const BasisConfig& reference, GateFamily family,
                             const TrainConfig& cfg,
                             const EpochCallback& callback = nullptr);

// Per-config empirical outcome frequencies q(x).
struct EmpiricalDistribution {
    std::map<BasisConfig, std::map<std::uint64_t, double>> per_config;

    static EmpiricalDistribution from_pool(const SnapshotPool& pool);
};

// KL divergence summed over the configs present: sum_x q(x)
// log(q(x)/p(x)) with p the rotated Born probability under the exactly
// normalized wavefunction. Returns +infinity if the model assigns zero
// probability to a measured outcome.
double kl_divergence(const EmpiricalDistribution& q, const ComplexRbmWavefunction& wf,
                     const BasisConfig& reference, GateFamily family);
double kl_divergence(const EmpiricalDistribution& q, const StateVector& model_state,
                     const BasisConfig& reference, GateFamily family);

} // namespace alqst

#endif
