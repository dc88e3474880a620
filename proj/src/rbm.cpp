#include "alqst/rbm.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace alqst {

namespace {

inline double softplus(double x) {
    return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline void check_visible(const RbmParams& params) {
    if (params.num_visible() > kMaxQubits) {
        throw std::length_error("exact enumeration caps visible units at 20");
    }
}

// Fills buffer[x] = log p~(x) for all 2^V visible configurations,
// visiting them in Gray-code order so each step updates the hidden
// activations by one weight column.
void log_prob_table(const RbmParams& params, Eigen::VectorXd& buffer) {
    check_visible(params);
    const int num_visible = params.num_visible();
    const Eigen::Index dim = Eigen::Index{1} << num_visible;
    buffer.resize(dim);

    Eigen::VectorXd activations = params.hidden_bias;
    double bias_term = 0.0;
    auto log_prob = [&]() {
        double acc = bias_term;
        for (Eigen::Index i = 0; i < activations.size(); ++i) {
            acc += softplus(activations[i]);
        }
        return acc;
    };
    buffer[0] = log_prob();
    std::uint64_t gray = 0;
    for (Eigen::Index i = 1; i < dim; ++i) {
        const int index_bit = std::countr_zero(static_cast<std::uint64_t>(i));
        const std::uint64_t mask = std::uint64_t{1} << index_bit;
        const int unit = num_visible - 1 - index_bit;  // qubit 0 = MSB
        gray ^= mask;
        if (gray & mask) {
            activations += params.weights.col(unit);
            bias_term += params.visible_bias[unit];
        } else {
            activations -= params.weights.col(unit);
            bias_term -= params.visible_bias[unit];
        }
        buffer[static_cast<Eigen::Index>(gray)] = log_prob();
    }
}

double log_sum_exp(const Eigen::VectorXd& values) {
    const double shift = values.maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        acc += std::exp(values[i] - shift);
    }
    return shift + std::log(acc);
}

inline Eigen::VectorXd visible_vector(std::uint64_t outcome, int num_visible) {
    Eigen::VectorXd v(num_visible);
    for (int j = 0; j < num_visible; ++j) {
        v[j] = outcome_bit(outcome, j, num_visible);
    }
    return v;
}

} // namespace

RbmParams RbmParams::zeros(int num_visible, int num_hidden) {
    RbmParams params;
    params.weights = Eigen::MatrixXd::Zero(num_hidden, num_visible);
    params.visible_bias = Eigen::VectorXd::Zero(num_visible);
    params.hidden_bias = Eigen::VectorXd::Zero(num_hidden);
    return params;
}

void RbmParams::setZero() {
    weights.setZero();
    visible_bias.setZero();
    hidden_bias.setZero();
}

RbmParams random_params(int num_visible, int num_hidden, double scale, Rng& rng) {
    RbmParams params = RbmParams::zeros(num_visible, num_hidden);
    for (int i = 0; i < num_hidden; ++i) {
        for (int j = 0; j < num_visible; ++j) {
            params.weights(i, j) = scale * (2.0 * uniform_unit(rng) - 1.0);
        }
    }
    return params;
}

ComplexRbmWavefunction random_wavefunction(int num_qubits, int num_hidden,
                                           double scale, Rng& rng) {
    ComplexRbmWavefunction wf;
    wf.amplitude = random_params(num_qubits, num_hidden, scale, rng);
    wf.phase = random_params(num_qubits, num_hidden, scale, rng);
    return wf;
}

double default_init_scale(int num_qubits) {
    return 0.1 / std::sqrt(static_cast<double>(num_qubits));
}

void validate(const TrainConfig& cfg) {
    if (cfg.epochs < 0 || cfg.learning_rate <= 0.0 || cfg.cd_steps < 1 ||
        cfg.batch_size < 1 || cfg.init_scale < 0.0) {
        throw std::invalid_argument("training config fields must be positive");
    }
}

double log_unnormalized_prob(const RbmParams& params, std::uint64_t visible) {
    const int num_visible = params.num_visible();
    double acc = 0.0;
    Eigen::VectorXd activations = params.hidden_bias;
    for (int j = 0; j < num_visible; ++j) {
        if (outcome_bit(visible, j, num_visible)) {
            acc += params.visible_bias[j];
            activations += params.weights.col(j);
        }
    }
    for (Eigen::Index i = 0; i < activations.size(); ++i) {
        acc += softplus(activations[i]);
    }
    return acc;
}

double unnormalized_prob(const RbmParams& params, std::uint64_t visible) {
    return std::exp(log_unnormalized_prob(params, visible));
}

double log_partition_exact(const RbmParams& params) {
    Eigen::VectorXd table;
    log_prob_table(params, table);
    return log_sum_exp(table);
}

double partition_exact(const RbmParams& params) {
    return std::exp(log_partition_exact(params));
}

std::complex<double> psi(const ComplexRbmWavefunction& wf, std::uint64_t x,
                         double z_lambda) {
    if (z_lambda <= 0.0) {
        throw std::invalid_argument("partition value must be positive");
    }
    const double log_amp =
        0.5 * (log_unnormalized_prob(wf.amplitude, x) - std::log(z_lambda));
    const double theta = log_unnormalized_prob(wf.phase, x);
    return std::polar(std::exp(log_amp), 0.5 * theta);
}

std::complex<double> rotated_psi(const ComplexRbmWavefunction& wf,
                                 const std::vector<Eigen::Matrix2cd>& rotations,
                                 std::uint64_t outcome, double z_lambda) {
    const int n = wf.num_qubits();
    if (static_cast<int>(rotations.size()) != n) {
        throw std::invalid_argument("rotation count does not match qubit count");
    }
    std::vector<int> rotated;
    for (int q = 0; q < n; ++q) {
        if (!rotations[q].isIdentity(0.0)) {
            rotated.push_back(q);
        }
    }
    const int r = static_cast<int>(rotated.size());
    std::complex<double> total = 0.0;
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << r); ++sub) {
        std::uint64_t x = outcome;
        std::complex<double> factor = 1.0;
        for (int k = 0; k < r; ++k) {
            const int q = rotated[k];
            const int x_bit = static_cast<int>((sub >> k) & 1u);
            const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
            x = x_bit ? (x | mask) : (x & ~mask);
            factor *= rotations[q](outcome_bit(outcome, q, n), x_bit);
        }
        total += factor * psi(wf, x, z_lambda);
    }
    return total;
}

std::complex<double> rotated_psi(const ComplexRbmWavefunction& wf,
                                 const BasisConfig& config, std::uint64_t outcome,
                                 GateFamily family, double z_lambda) {
    const BasisConfig reference = BasisConfig::uniform(Axis::Z, config.size());
    return rotated_psi(wf, relative_rotations(config, reference, family), outcome,
                       z_lambda);
}

StateVector rbm_to_statevector(const ComplexRbmWavefunction& wf) {
    const int n = wf.num_qubits();
    Eigen::VectorXd log_amp_table;
    Eigen::VectorXd theta_table;
    log_prob_table(wf.amplitude, log_amp_table);
    log_prob_table(wf.phase, theta_table);
    const double log_z = log_sum_exp(log_amp_table);
    Eigen::VectorXcd amps(log_amp_table.size());
    for (Eigen::Index x = 0; x < amps.size(); ++x) {
        amps[x] = std::polar(std::exp(0.5 * (log_amp_table[x] - log_z)),
                             0.5 * theta_table[x]);
    }
    return StateVector(n, std::move(amps));
}

Eigen::MatrixXd cd_negative_samples(const RbmParams& params,
                                    const Eigen::MatrixXd& batch, int k, Rng& rng) {
    if (k < 1) {
        throw std::invalid_argument("contrastive divergence needs k >= 1");
    }
    const Eigen::Index rows = batch.rows();
    Eigen::MatrixXd visible = batch;
    Eigen::MatrixXd hidden(rows, params.num_hidden());
    for (int step = 0; step < k; ++step) {
        Eigen::MatrixXd hidden_act =
            (visible * params.weights.transpose()).rowwise() +
            params.hidden_bias.transpose();
        for (Eigen::Index s = 0; s < rows; ++s) {
            for (Eigen::Index i = 0; i < hidden.cols(); ++i) {
                hidden(s, i) = uniform_unit(rng) < sigmoid(hidden_act(s, i)) ? 1.0 : 0.0;
            }
        }
        Eigen::MatrixXd visible_act =
            (hidden * params.weights).rowwise() + params.visible_bias.transpose();
        for (Eigen::Index s = 0; s < rows; ++s) {
            for (Eigen::Index j = 0; j < visible.cols(); ++j) {
                visible(s, j) = uniform_unit(rng) < sigmoid(visible_act(s, j)) ? 1.0 : 0.0;
            }
        }
    }
    return visible;
}

PreparedConfig prepare_config(const BasisConfig& config, const BasisConfig& reference,
                              GateFamily family) {
    PreparedConfig prepared;
    prepared.rotations = relative_rotations(config, reference, family);
    for (int q = 0; q < config.size(); ++q) {
        if (!prepared.rotations[q].isIdentity(0.0)) {
            prepared.rotated_qubits.push_back(q);
        }
    }
    prepared.is_reference = prepared.rotated_qubits.empty();
    return prepared;
}

namespace {

inline Eigen::MatrixXd hidden_sigmoids(const RbmParams& params,
                                       const Eigen::MatrixXd& visible) {
    Eigen::MatrixXd act = (visible * params.weights.transpose()).rowwise() +
                          params.hidden_bias.transpose();
    for (Eigen::Index i = 0; i < act.size(); ++i) {
        act.data()[i] = sigmoid(act.data()[i]);
    }
    return act;
}

// grad += coefficient * sum over rows of dlog p~/dparams, rows carrying
// the per-row weights baked into `weighted_visible`.
void accumulate_rows(RbmParams& grad, const Eigen::MatrixXd& visible,
                     const Eigen::MatrixXd& sigmoids,
                     const Eigen::VectorXd& row_weights, double coefficient) {
    grad.visible_bias += coefficient * (visible.transpose() * row_weights);
    grad.hidden_bias += coefficient * (sigmoids.transpose() * row_weights);
    grad.weights += coefficient * (sigmoids.transpose() *
                                   (visible.array().colwise() * row_weights.array())
                                       .matrix());
}

} // namespace

WavefunctionGradient gradient(const ComplexRbmWavefunction& wf,
                              const std::vector<BatchItem>& batch,
                              int cd_steps, Rng& rng, ModelTerm model_term) {
    if (batch.empty()) {
        throw std::invalid_argument("gradient needs a nonempty batch");
    }
    const int n = wf.num_qubits();
    const double inv_batch = 1.0 / static_cast<double>(batch.size());

    WavefunctionGradient grad;
    grad.amplitude = RbmParams::zeros(n, wf.amplitude.num_hidden());
    grad.phase = RbmParams::zeros(n, wf.phase.num_hidden());

    // positive phase of the reference-basis snapshots, batched
    std::vector<const BatchItem*> rotated_items;
    Eigen::Index reference_count = 0;
    for (const BatchItem& item : batch) {
        if (static_cast<int>(item.config->rotations.size()) != n) {
            throw std::invalid_argument("snapshot qubit count does not match wavefunction");
        }
        if (item.config->is_reference) {
            ++reference_count;
        } else {
            rotated_items.push_back(&item);
        }
    }
    if (reference_count > 0) {
        Eigen::MatrixXd visible(reference_count, n);
        Eigen::Index row = 0;
        for (const BatchItem& item : batch) {
            if (!item.config->is_reference) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                visible(row, j) = outcome_bit(item.outcome, j, n);
            }
            ++row;
        }
        const Eigen::MatrixXd sig = hidden_sigmoids(wf.amplitude, visible);
        accumulate_rows(grad.amplitude, visible, sig,
                        Eigen::VectorXd::Ones(reference_count), -inv_batch);
    }

    // rotated snapshots: complex-weighted sums over the substituted bits
    for (const BatchItem* item : rotated_items) {
        const PreparedConfig& prep = *item->config;
        const int r = static_cast<int>(prep.rotated_qubits.size());
        const Eigen::Index terms = Eigen::Index{1} << r;

        Eigen::MatrixXd visible(terms, n);
        Eigen::VectorXcd unitary(terms);
        for (Eigen::Index sub = 0; sub < terms; ++sub) {
            std::uint64_t x = item->outcome;
            std::complex<double> u = 1.0;
            for (int k = 0; k < r; ++k) {
                const int q = prep.rotated_qubits[k];
                const int x_bit = static_cast<int>((sub >> k) & 1u);
                const std::uint64_t mask = std::uint64_t{1} << (n - 1 - q);
                x = x_bit ? (x | mask) : (x & ~mask);
                u *= prep.rotations[q](outcome_bit(item->outcome, q, n), x_bit);
            }
            unitary[sub] = u;
            for (int j = 0; j < n; ++j) {
                visible(sub, j) = outcome_bit(x, j, n);
            }
        }

        Eigen::MatrixXd act_amp = (visible * wf.amplitude.weights.transpose()).rowwise() +
                                  wf.amplitude.hidden_bias.transpose();
        Eigen::MatrixXd act_phase = (visible * wf.phase.weights.transpose()).rowwise() +
                                    wf.phase.hidden_bias.transpose();
        Eigen::VectorXd half_log_amp = 0.5 * (visible * wf.amplitude.visible_bias);
        Eigen::VectorXd half_theta = 0.5 * (visible * wf.phase.visible_bias);
        Eigen::MatrixXd sig_amp(terms, act_amp.cols());
        Eigen::MatrixXd sig_phase(terms, act_phase.cols());
        for (Eigen::Index t = 0; t < terms; ++t) {
            for (Eigen::Index i = 0; i < act_amp.cols(); ++i) {
                half_log_amp[t] += 0.5 * softplus(act_amp(t, i));
                sig_amp(t, i) = sigmoid(act_amp(t, i));
            }
            for (Eigen::Index i = 0; i < act_phase.cols(); ++i) {
                half_theta[t] += 0.5 * softplus(act_phase(t, i));
                sig_phase(t, i) = sigmoid(act_phase(t, i));
            }
        }
        const double shift = half_log_amp.maxCoeff();

        Eigen::VectorXd weight_re(terms), weight_im(terms);
        std::complex<double> denom = 0.0;
        for (Eigen::Index t = 0; t < terms; ++t) {
            const std::complex<double> w =
                unitary[t] * std::polar(std::exp(half_log_amp[t] - shift), half_theta[t]);
            weight_re[t] = w.real();
            weight_im[t] = w.imag();
            denom += w;
        }
        const double denom_norm = std::norm(denom);
        if (denom_norm == 0.0) {
            continue;  // outcome has zero amplitude; no gradient signal
        }
        // d(-log p)/d lambda = -Re[num/denom]; d(-log p)/d mu = Im[num/denom]
        const double dr = denom.real(), di = denom.imag();
        const double scale = inv_batch / denom_norm;
        const Eigen::VectorXd lambda_weights = dr * weight_re + di * weight_im;
        const Eigen::VectorXd mu_weights = dr * weight_im - di * weight_re;
        accumulate_rows(grad.amplitude, visible, sig_amp, lambda_weights, -scale);
        accumulate_rows(grad.phase, visible, sig_phase, mu_weights, scale);
    }

    // log Z term of the amplitude machine (the phase machine has none)
    if (model_term == ModelTerm::ExactEnumeration) {
        Eigen::VectorXd table;
        log_prob_table(wf.amplitude, table);
        const double log_z = log_sum_exp(table);
        Eigen::MatrixXd visible(table.size(), n);
        Eigen::VectorXd probs(table.size());
        for (Eigen::Index x = 0; x < table.size(); ++x) {
            probs[x] = std::exp(table[x] - log_z);
            for (int j = 0; j < n; ++j) {
                visible(x, j) = outcome_bit(static_cast<std::uint64_t>(x), j, n);
            }
        }
        const Eigen::MatrixXd sig = hidden_sigmoids(wf.amplitude, visible);
        accumulate_rows(grad.amplitude, visible, sig, probs, 1.0);
    } else {
        Eigen::MatrixXd chain(batch.size(), n);
        for (std::size_t s = 0; s < batch.size(); ++s) {
            for (int j = 0; j < n; ++j) {
                chain(static_cast<Eigen::Index>(s), j) =
                    outcome_bit(batch[s].outcome, j, n);
            }
        }
        const Eigen::MatrixXd negatives =
            cd_negative_samples(wf.amplitude, chain, cd_steps, rng);
        const Eigen::MatrixXd sig = hidden_sigmoids(wf.amplitude, negatives);
        accumulate_rows(grad.amplitude, negatives, sig,
                        Eigen::VectorXd::Ones(negatives.rows()),
                        1.0 / static_cast<double>(negatives.rows()));
    }
    return grad;
}

ComplexRbmWavefunction train(ComplexRbmWavefunction wf, const SnapshotPool& pool,
                             const BasisConfig& reference, GateFamily family,
                             const TrainConfig& cfg, const EpochCallback& callback) {
    validate(cfg);
    if (pool.snapshots.empty()) {
        throw std::invalid_argument("training needs a nonempty pool");
    }
    if (pool.num_qubits != wf.num_qubits()) {
        throw std::invalid_argument("pool qubit count does not match wavefunction");
    }

    // one prepared rotation set per distinct config
    std::map<BasisConfig, PreparedConfig> prepared;
    for (const auto& snapshot : pool.snapshots) {
        if (!prepared.count(snapshot.config)) {
            prepared.emplace(snapshot.config,
                             prepare_config(snapshot.config, reference, family));
        }
    }
    std::vector<BatchItem> items;
    items.reserve(pool.size());
    for (const auto& snapshot : pool.snapshots) {
        items.push_back(BatchItem{&prepared.at(snapshot.config), snapshot.outcome});
    }

    Rng rng = make_rng(cfg.seed, 0x7261696e);  // training stream
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const std::size_t batch_size =
        std::min<std::size_t>(cfg.batch_size, items.size());
    std::vector<BatchItem> batch;
    batch.reserve(batch_size);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Fisher-Yates with the portable generator
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
        }
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(items[order[i]]);
            }
            const WavefunctionGradient grad = gradient(wf, batch, cfg.cd_steps, rng);
            wf.amplitude.weights -= cfg.learning_rate * grad.amplitude.weights;
            wf.amplitude.visible_bias -= cfg.learning_rate * grad.amplitude.visible_bias;
            wf.amplitude.hidden_bias -= cfg.learning_rate * grad.amplitude.hidden_bias;
            wf.phase.weights -= cfg.learning_rate * grad.phase.weights;
            wf.phase.visible_bias -= cfg.learning_rate * grad.phase.visible_bias;
            wf.phase.hidden_bias -= cfg.learning_rate * grad.phase.hidden_bias;
        }
        if (callback) {
            callback(EpochInfo{epoch, &wf});
        }
    }
    return wf;
}

EmpiricalDistribution EmpiricalDistribution::from_pool(const SnapshotPool& pool) {
    EmpiricalDistribution dist;
    for (const auto& [config, outcomes] : pool.grouped_by_config()) {
        auto& frequencies = dist.per_config[config];
        const double weight = 1.0 / static_cast<double>(outcomes.size());
        for (std::uint64_t outcome : outcomes) {
            frequencies[outcome] += weight;
        }
    }
    return dist;
}

double kl_divergence(const EmpiricalDistribution& q, const StateVector& model_state,
                     const BasisConfig& reference, GateFamily family) {
    double total = 0.0;
    for (const auto& [config, frequencies] : q.per_config) {
        const StateVector rotated =
            rotate_state(model_state, relative_rotations(config, reference, family));
        for (const auto& [outcome, frequency] : frequencies) {
            if (frequency <= 0.0) {
                continue;
            }
            const double p = std::norm(rotated.amplitudes[static_cast<Eigen::Index>(outcome)]);
            if (p == 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            total += frequency * std::log(frequency / p);
        }
    }
    return total;
}

double kl_divergence(const EmpiricalDistribution& q, const ComplexRbmWavefunction& wf,
                     const BasisConfig& reference, GateFamily family) {
    return kl_divergence(q, rbm_to_statevector(wf), reference, family);
}

} // namespace alqst
