#include "alqst/committee.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "alqst/observables.hpp"

namespace alqst {

Committee make_committee(int num_qubits, const CommitteeConfig& cfg, std::uint64_t seed) {
    if (cfg.n_members < 1 || cfg.hidden_per_visible < 1) {
        throw std::invalid_argument("committee needs at least one member and one hidden unit");
    }
    const int num_hidden = cfg.hidden_per_visible * num_qubits;
    const double scale =
        cfg.init_scale > 0.0 ? cfg.init_scale : default_init_scale(num_qubits);
    Committee committee;
    for (int m = 0; m < cfg.n_members; ++m) {
        Rng rng = make_rng(seed, static_cast<std::uint64_t>(m));
        committee.members.push_back(random_wavefunction(num_qubits, num_hidden, scale, rng));
        committee.member_seeds.push_back(mix_seed(seed, 0x1000u + static_cast<std::uint64_t>(m)));
    }
    committee.initial_params = committee.members;
    return committee;
}

void reset_to_initial(Committee& committee) {
    committee.members = committee.initial_params;
}

namespace {

std::uint64_t fnv_accumulate(std::uint64_t hash, const double* data, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], sizeof(bits));
        for (int byte = 0; byte < 8; ++byte) {
            hash ^= (bits >> (8 * byte)) & 0xffu;
            hash *= 0x100000001b3ULL;
        }
    }
    return hash;
}

std::uint64_t fnv_params(std::uint64_t hash, const RbmParams& params) {
    hash = fnv_accumulate(hash, params.weights.data(), params.weights.size());
    hash = fnv_accumulate(hash, params.visible_bias.data(), params.visible_bias.size());
    hash = fnv_accumulate(hash, params.hidden_bias.data(), params.hidden_bias.size());
    return hash;
}

} // namespace

std::uint64_t params_fingerprint(const ComplexRbmWavefunction& wf) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    hash = fnv_params(hash, wf.amplitude);
    hash = fnv_params(hash, wf.phase);
    return hash;
}

std::vector<StateVector> member_states(const Committee& committee) {
    std::vector<StateVector> states;
    states.reserve(committee.members.size());
    for (const auto& member : committee.members) {
        states.push_back(rbm_to_statevector(member));
    }
    return states;
}

StateVector reconstructed_state(const StateVector& member_state,
                                const BasisConfig& reference, GateFamily family) {
    std::vector<Eigen::Matrix2cd> rotations(member_state.num_qubits);
    for (int q = 0; q < member_state.num_qubits; ++q) {
        rotations[q] = rotation_gate(reference.axis(q), family).matrix.adjoint();
    }
    return rotate_state(member_state, rotations);
}

double amplitude_structure(const std::vector<StateVector>& members) {
    if (members.empty()) {
        throw std::invalid_argument("structure score needs at least one member");
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(members[0].dim());
    for (const StateVector& state : members) {
        mean += state.amplitudes.cwiseAbs();
    }
    mean /= static_cast<double>(members.size());
    const double entry_mean = mean.mean();
    return std::max(0.0,
                    mean.squaredNorm() / static_cast<double>(mean.size()) -
                        entry_mean * entry_mean);
}

BasisConfig select_reference(const SnapshotPool& bootstrap_pool,
                             const CommitteeConfig& committee_cfg,
                             const TrainConfig& train_cfg, GateFamily family,
                             std::uint64_t seed, int per_basis_cap) {
    if (per_basis_cap < 1) {
        throw std::invalid_argument("selection sample cap must be >= 1");
    }
    const int n = bootstrap_pool.num_qubits;
    auto grouped = bootstrap_pool.grouped_by_config();

    // the same starting machines judge every candidate basis
    const Committee prototype = make_committee(n, committee_cfg, mix_seed(seed, 0x5e1ec7));
    BasisConfig best;
    double best_score = -1.0;
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        const BasisConfig candidate = BasisConfig::uniform(axis, n);
        auto it = grouped.find(candidate);
        if (it == grouped.end()) {
            throw std::invalid_argument(
                "bootstrap pool is missing uniform config " + candidate.str());
        }
        SnapshotPool basis_pool;
        basis_pool.num_qubits = n;
        const int keep = std::min<int>(per_basis_cap, static_cast<int>(it->second.size()));
        for (int i = 0; i < keep; ++i) {
            basis_pool.add(Snapshot{candidate, it->second[i]});
        }

        // amplitude-only training: the candidate acts as its own
        // reference, so phase gradients vanish
        std::vector<StateVector> states;
        states.reserve(prototype.size());
        for (int m = 0; m < prototype.size(); ++m) {
            TrainConfig cfg = train_cfg;
            cfg.seed = prototype.member_seeds[m];
            states.push_back(rbm_to_statevector(
                train(prototype.initial_params[m], basis_pool, candidate, family, cfg)));
        }
        const double score = amplitude_structure(states);
        if (score > best_score) {
            best_score = score;
            best = candidate;
        }
    }
    return best;
}

DisagreementScores disagreement_amplitude_vs_phase(const std::vector<StateVector>& members) {
    if (members.empty()) {
        throw std::invalid_argument("disagreement needs at least one member");
    }
    const int count = static_cast<int>(members.size());
    const Eigen::Index dim = members[0].dim();

    DisagreementScores scores;
    // gauge anchor: basis state with the largest mean amplitude
    Eigen::VectorXd mean_amp = Eigen::VectorXd::Zero(dim);
    for (const auto& state : members) {
        mean_amp += state.amplitudes.cwiseAbs();
    }
    Eigen::Index anchor = 0;
    mean_amp.maxCoeff(&anchor);

    auto unit_phasor = [](std::complex<double> z) {
        const double mag = std::abs(z);
        return mag > 0.0 ? z / mag : std::complex<double>(1.0, 0.0);
    };

    for (Eigen::Index x = 0; x < dim; ++x) {
        double mean = 0.0, mean_sq = 0.0;
        std::complex<double> phasor_sum = 0.0;
        for (int m = 0; m < count; ++m) {
            const std::complex<double> amp = members[m].amplitudes[x];
            const double mag = std::abs(amp);
            mean += mag;
            mean_sq += mag * mag;
            phasor_sum += unit_phasor(amp) *
                          std::conj(unit_phasor(members[m].amplitudes[anchor]));
        }
        mean /= count;
        mean_sq /= count;
        scores.amplitude += std::max(0.0, mean_sq - mean * mean);
        scores.phase += std::max(0.0, 1.0 - std::abs(phasor_sum) / count);
    }
    // ties go to amplitude; the epsilon absorbs rounding of exact ties
    const double tie_margin = 1e-12 * std::max(1.0, scores.amplitude);
    scores.winner = scores.phase > scores.amplitude + tie_margin
                        ? DisagreementKind::Phase
                        : DisagreementKind::Amplitude;
    return scores;
}

BasisConfig select_query_config(const std::vector<StateVector>& members,
                                const std::vector<BasisConfig>& candidates,
                                const BasisConfig& reference, GateFamily family) {
    if (candidates.empty()) {
        throw std::invalid_argument("candidate list is empty");
    }
    const int count = static_cast<int>(members.size());
    BasisConfig best;
    double best_score = -1.0;
    for (const BasisConfig& candidate : candidates) {
        const auto rotations = relative_rotations(candidate, reference, family);
        std::vector<Eigen::VectorXd> probs;
        probs.reserve(count);
        for (const auto& state : members) {
            probs.push_back(rotate_state(state, rotations).amplitudes.cwiseAbs2());
        }
        double score = 0.0;
        for (Eigen::Index x = 0; x < probs[0].size(); ++x) {
            double mean = 0.0, mean_sq = 0.0;
            for (int m = 0; m < count; ++m) {
                mean += probs[m][x];
                mean_sq += probs[m][x] * probs[m][x];
            }
            mean /= count;
            mean_sq /= count;
            score += std::max(0.0, mean_sq - mean * mean);
        }
        if (score > best_score ||
            (score == best_score && candidate.str() < best.str())) {
            best_score = score;
            best = candidate;
        }
    }
    return best;
}

std::vector<BasisConfig> candidate_configs(int num_qubits, int cap, Rng& rng) {
    if (cap < 3) {
        throw std::invalid_argument("candidate cap must be at least 3");
    }
    std::int64_t total = 1;
    for (int q = 0; q < num_qubits && total <= cap; ++q) {
        total *= 3;
    }
    std::vector<BasisConfig> candidates;
    if (total <= cap) {
        // full enumeration in lexicographic order over {x, y, z}
        std::string axes(num_qubits, 'x');
        const char alphabet[3] = {'x', 'y', 'z'};
        std::vector<int> digits(num_qubits, 0);
        while (true) {
            for (int q = 0; q < num_qubits; ++q) {
                axes[q] = alphabet[digits[q]];
            }
            candidates.emplace_back(axes);
            int pos = num_qubits - 1;
            while (pos >= 0 && digits[pos] == 2) {
                digits[pos--] = 0;
            }
            if (pos < 0) {
                break;
            }
            ++digits[pos];
        }
        return candidates;
    }
    std::set<std::string> seen;
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        const BasisConfig uniform = BasisConfig::uniform(axis, num_qubits);
        candidates.push_back(uniform);
        seen.insert(uniform.str());
    }
    const char alphabet[3] = {'x', 'y', 'z'};
    std::string axes(num_qubits, 'x');
    while (static_cast<int>(candidates.size()) < cap) {
        for (int q = 0; q < num_qubits; ++q) {
            axes[q] = alphabet[uniform_index(rng, 3)];
        }
        if (seen.insert(axes).second) {
            candidates.emplace_back(axes);
        }
    }
    return candidates;
}

void validate(const QueryPolicy& policy, int num_qubits) {
    if (policy.n_per_query < 1 || policy.reference_multiplier < 1 ||
        policy.max_queries < 1 || policy.bootstrap_per_basis < 1 ||
        policy.selection_sample_cap < 1) {
        throw std::invalid_argument("query policy counts must be >= 1");
    }
    if (policy.candidate_cap != 0 && policy.candidate_cap < 3) {
        throw std::invalid_argument("candidate cap must be >= 3");
    }
    if (const auto* stop = std::get_if<FidelityStop>(&policy.stop)) {
        if (stop->threshold <= 0.0 || stop->threshold > 1.0) {
            throw std::invalid_argument("fidelity stop threshold must be in (0, 1]");
        }
    }
    (void)num_qubits;
}

int resolve_candidate_cap(const QueryPolicy& policy, int num_qubits) {
    if (policy.candidate_cap > 0) {
        return policy.candidate_cap;
    }
    const std::int64_t by_size = std::int64_t{1} << num_qubits;
    return static_cast<int>(std::min<std::int64_t>(by_size, 256));
}

double mean_rescaled_fidelity(const std::vector<StateVector>& member_states,
                              const BasisConfig& reference, GateFamily family,
                              const StateVector& target) {
    double acc = 0.0;
    for (const auto& state : member_states) {
        acc += rescaled_fidelity(
            fidelity(reconstructed_state(state, reference, family), target),
            target.num_qubits);
    }
    return acc / static_cast<double>(member_states.size());
}

namespace {

Eigen::VectorXd member_mean_density(const std::vector<StateVector>& member_states,
                                    const BasisConfig& reference, GateFamily family) {
    Eigen::VectorXd mean;
    for (const auto& state : member_states) {
        const Eigen::VectorXd density =
            density_vector(reconstructed_state(state, reference, family));
        if (mean.size() == 0) {
            mean = density;
        } else {
            mean += density;
        }
    }
    return mean / static_cast<double>(member_states.size());
}

Eigen::VectorXd member_mean_greens(const std::vector<StateVector>& member_states,
                                   const BasisConfig& reference, GateFamily family) {
    Eigen::VectorXd mean;
    for (const auto& state : member_states) {
        const Eigen::VectorXd greens =
            greens_vector(reconstructed_state(state, reference, family));
        if (mean.size() == 0) {
            mean = greens;
        } else {
            mean += greens;
        }
    }
    return mean / static_cast<double>(member_states.size());
}

} // namespace

bool stopping_met(const StoppingRule& rule, const std::vector<StateVector>& member_states,
                  const BasisConfig& reference, GateFamily family,
                  const EvaluationContext& eval) {
    if (!eval.target.has_value()) {
        throw std::invalid_argument("stopping rule needs a known target state");
    }
    const StateVector& target = *eval.target;
    if (const auto* stop = std::get_if<FidelityStop>(&rule)) {
        return mean_rescaled_fidelity(member_states, reference, family, target) >=
               stop->threshold;
    }
    if (const auto* stop = std::get_if<XxzCorrelatorStop>(&rule)) {
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
            const double target_value = nn_correlator(target, axis);
            double mean = 0.0;
            for (const auto& state : member_states) {
                mean += nn_correlator(reconstructed_state(state, reference, family), axis);
            }
            mean /= static_cast<double>(member_states.size());
            if (std::abs(target_value) < 1e-12) {
                continue;  // no signal to reproduce along this axis
            }
            if (std::abs(mean) < stop->fraction * std::abs(target_value) ||
                std::signbit(mean) != std::signbit(target_value)) {
                return false;
            }
        }
        return true;
    }
    const auto& stop = std::get<KcsObservablesStop>(rule);
    const Eigen::VectorXd target_density = density_vector(target);
    const Eigen::VectorXd target_greens = greens_vector(target);
    const Eigen::VectorXd density =
        member_mean_density(member_states, reference, family);
    const Eigen::VectorXd greens = member_mean_greens(member_states, reference, family);
    return relative_diff(density, target_density) <= stop.density_tol &&
           relative_diff(greens, target_greens) <= stop.correlator_tol;
}

std::vector<Snapshot> bootstrap(MeasurementSource& source, int per_basis) {
    if (per_basis < 1) {
        throw std::invalid_argument("bootstrap needs at least one sample per basis");
    }
    const int n = source.num_qubits();
    std::vector<Snapshot> snapshots;
    snapshots.reserve(3 * static_cast<std::size_t>(per_basis));
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        const auto drawn = source.draw(BasisConfig::uniform(axis, n), per_basis);
        snapshots.insert(snapshots.end(), drawn.begin(), drawn.end());
    }
    return snapshots;
}

namespace {

// Trains every member from its frozen initial parameters and streams
// curve points through the observer.
std::vector<StateVector> run_training_cycle(
    Committee& committee, const SnapshotPool& pool, const BasisConfig& reference,
    GateFamily family, const TrainConfig& train_cfg, int cycle,
    const EvaluationContext& eval, const CurveObserver& observer,
    const ObserverOptions& observer_opts) {
    reset_to_initial(committee);
    std::vector<StateVector> states;
    states.reserve(committee.size());
    const EmpiricalDistribution empirical =
        observer ? EmpiricalDistribution::from_pool(pool) : EmpiricalDistribution{};
    for (int m = 0; m < committee.size(); ++m) {
        TrainConfig cfg = train_cfg;
        cfg.seed = mix_seed(committee.member_seeds[m], static_cast<std::uint64_t>(cycle));
        EpochCallback callback;
        if (observer) {
            callback = [&, m](const EpochInfo& info) {
                const bool due = info.epoch % std::max(1, observer_opts.eval_every) == 0 ||
                                 info.epoch == cfg.epochs;
                if (!due) {
                    return;
                }
                const StateVector state = rbm_to_statevector(*info.wavefunction);
                CurvePoint point;
                point.cycle = cycle;
                point.epoch = cycle * cfg.epochs + info.epoch;
                point.member = m;
                if (eval.target.has_value()) {
                    point.one_minus_rescaled_fidelity =
                        1.0 - rescaled_fidelity(
                                  fidelity(reconstructed_state(state, reference, family),
                                           *eval.target),
                                  state.num_qubits);
                }
                point.kl = kl_divergence(empirical, state, reference, family);
                point.n_samples = static_cast<int>(pool.size());
                observer(point);
            };
        }
        committee.members[m] =
            train(committee.members[m], pool, reference, family, cfg, callback);
        states.push_back(rbm_to_statevector(committee.members[m]));
    }
    return states;
}

} // namespace

AlResult al_loop(MeasurementSource& source, const QueryPolicy& policy,
                 const CommitteeConfig& committee_cfg, const TrainConfig& train_cfg,
                 GateFamily family, const EvaluationContext& eval, std::uint64_t seed,
                 const CurveObserver& observer, const ObserverOptions& observer_opts) {
    const int n = source.num_qubits();
    validate(policy, n);
    validate(train_cfg);

    // step 1: bootstrap measurements in the three uniform configs
    SnapshotPool bootstrap_pool;
    bootstrap_pool.num_qubits = n;
    for (const auto& snapshot : bootstrap(source, policy.bootstrap_per_basis)) {
        bootstrap_pool.add(snapshot);
    }

    // step 2: pick the reference basis; only its bootstrap samples are
    // kept for training, the other two bases were spent on selection
    AlResult result;
    result.learner.reference =
        select_reference(bootstrap_pool, committee_cfg, train_cfg, family,
                         mix_seed(seed, 0xba5e), policy.selection_sample_cap);
    result.learner.pool.num_qubits = n;
    for (const auto& snapshot : bootstrap_pool.snapshots) {
        if (snapshot.config == result.learner.reference) {
            result.learner.pool.add(snapshot);
        }
    }
    result.learner.bootstrap_kept = static_cast<int>(result.learner.pool.size());

    result.committee = make_committee(n, committee_cfg, mix_seed(seed, 0xc0117e));
    Rng candidate_rng = make_rng(seed, 0xca4d);

    std::deque<BasisConfig> forced_queue;
    int consecutive_reference = 0;
    const int cap = resolve_candidate_cap(policy, n);

    for (int cycle = 0;; ++cycle) {
        result.member_states =
            run_training_cycle(result.committee, result.learner.pool,
                               result.learner.reference, family, train_cfg, cycle,
                               eval, observer, observer_opts);
        result.cycles = cycle + 1;

        if (stopping_met(policy.stop, result.member_states, result.learner.reference,
                         family, eval)) {
            result.status = StopStatus::RuleMet;
            break;
        }
        if (result.learner.n_queries() >= policy.max_queries) {
            result.status = StopStatus::QueryBudgetExhausted;
            break;
        }

        // step 4: arbitration, unless a forced orthogonal config is queued
        BasisConfig chosen;
        std::string rule;
        if (!forced_queue.empty()) {
            chosen = forced_queue.front();
            forced_queue.pop_front();
            rule = "forced";
        } else {
            const DisagreementScores scores =
                disagreement_amplitude_vs_phase(result.member_states);
            if (scores.winner == DisagreementKind::Amplitude) {
                chosen = result.learner.reference;
                rule = "4a";
            } else {
                chosen = select_query_config(result.member_states,
                                             candidate_configs(n, cap, candidate_rng),
                                             result.learner.reference, family);
                rule = "4b";
            }
        }

        // step 5: measure the requested config; the reference gets the
        // oversampling multiplier
        const bool is_reference = chosen == result.learner.reference;
        const int added =
            policy.n_per_query * (is_reference ? policy.reference_multiplier : 1);
        for (const auto& snapshot : source.draw(chosen, added)) {
            result.learner.pool.add(snapshot);
        }
        result.learner.query_log.push_back(
            QueryRecord{result.learner.n_queries() + 1, chosen, added, rule});

        if (rule != "forced") {
            consecutive_reference = is_reference ? consecutive_reference + 1 : 0;
            if (consecutive_reference >= 2 && forced_queue.empty()) {
                // the reference was requested twice in a row: enqueue the
                // two other uniform configs for the next cycles
                for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
                    const BasisConfig uniform = BasisConfig::uniform(axis, n);
                    if (uniform != result.learner.reference) {
                        forced_queue.push_back(uniform);
                    }
                }
                consecutive_reference = 0;
            }
        }
    }
    return result;
}

int BaselineBudget::n_tot() const {
    int total = 0;
    for (const auto& [config, count] : per_config) {
        total += count;
    }
    return total;
}

std::vector<BasisConfig> random_distinct_configs(int num_qubits, int count,
                                                 const std::vector<BasisConfig>& exclude,
                                                 Rng& rng) {
    std::set<std::string> used;
    for (const BasisConfig& config : exclude) {
        used.insert(config.str());
    }
    const char alphabet[3] = {'x', 'y', 'z'};
    std::vector<BasisConfig> configs;
    std::string axes(num_qubits, 'x');
    while (static_cast<int>(configs.size()) < count) {
        for (int q = 0; q < num_qubits; ++q) {
            axes[q] = alphabet[uniform_index(rng, 3)];
        }
        if (used.insert(axes).second) {
            configs.emplace_back(axes);
        }
    }
    return configs;
}

BaselineBudget make_baseline_budget(int num_qubits, const BasisConfig& al_reference,
                                    const std::vector<std::pair<BasisConfig, int>>& counts,
                                    Rng& rng) {
    BaselineBudget budget;
    budget.reference = BasisConfig::uniform(Axis::Z, num_qubits);
    std::vector<BasisConfig> taken = {budget.reference};
    for (const auto& [config, count] : counts) {
        if (config == al_reference) {
            budget.per_config.emplace_back(budget.reference, count);
        } else {
            const BasisConfig fresh =
                random_distinct_configs(num_qubits, 1, taken, rng).front();
            taken.push_back(fresh);
            budget.per_config.emplace_back(fresh, count);
        }
    }
    return budget;
}

BaselineBudget budget_from_learner(const LearnerState& learner, Rng& rng) {
    std::vector<std::pair<BasisConfig, int>> counts;
    for (const auto& [config, outcomes] : learner.pool.grouped_by_config()) {
        counts.emplace_back(config, static_cast<int>(outcomes.size()));
    }
    return make_baseline_budget(learner.pool.num_qubits, learner.reference, counts, rng);
}

BaselineResult baseline_run(MeasurementSource& source, const BaselineBudget& budget,
                            const CommitteeConfig& committee_cfg,
                            const TrainConfig& train_cfg, GateFamily family,
                            std::uint64_t seed, const CurveObserver& observer,
                            const ObserverOptions& observer_opts,
                            const EvaluationContext& eval) {
    if (budget.n_tot() < 1) {
        throw std::invalid_argument("baseline budget is empty");
    }
    const int n = source.num_qubits();
    BaselineResult result;
    result.learner.reference = budget.reference;
    result.learner.pool.num_qubits = n;
    for (const auto& [config, count] : budget.per_config) {
        for (const auto& snapshot : source.draw(config, count)) {
            result.learner.pool.add(snapshot);
        }
    }
    result.committee = make_committee(n, committee_cfg, mix_seed(seed, 0xba5e11));
    result.member_states =
        run_training_cycle(result.committee, result.learner.pool, budget.reference,
                           family, train_cfg, 0, eval, observer, observer_opts);
    return result;
}

} // namespace alqst
