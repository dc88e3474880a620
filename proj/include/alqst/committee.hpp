#ifndef ALQST_COMMITTEE_HPP
#define ALQST_COMMITTEE_HPP

#include <deque>
#include <optional>
#include <variant>

#include "alqst/rbm.hpp"
#include "alqst/source.hpp"

namespace alqst {

struct CommitteeConfig {
    int n_members = 4;
    int hidden_per_visible = 1;
    double init_scale = 0.0;  // 0 resolves to default_init_scale(N)
};

// Independently seeded wavefunctions plus their frozen starting
// parameters; every learning cycle restarts from those.
struct Committee {
    std::vector<ComplexRbmWavefunction> members;
    std::vector<ComplexRbmWavefunction> initial_params;
    std::vector<std::uint64_t> member_seeds;

    int size() const { return static_cast<int>(members.size()); }
};

Committee make_committee(int num_qubits, const CommitteeConfig& cfg, std::uint64_t seed);
void reset_to_initial(Committee& committee);
std::uint64_t params_fingerprint(const ComplexRbmWavefunction& wf);

// Dense states of all members, in the frame they were trained in.
std::vector<StateVector> member_states(const Committee& committee);

// Undo the reference rotation: the physical state whose measurement
// statistics the trained machine reproduces.
StateVector reconstructed_state(const StateVector& member_state,
                                const BasisConfig& reference, GateFamily family);

// Picks the reference basis for amplitude learning. One committee with
// shared initial parameters is trained per uniform candidate basis on
// that basis's snapshots alone (amplitude-only: the candidate acts as
// its own reference). The winner is the basis whose committee-mean
// amplitude vector is most structured, i.e. has the largest variance
// over its entries; a peaked measurement distribution is the one the
// machines pin down consistently. Ties break in the order z, x, y.
// `per_basis_cap` bounds the snapshots used per basis.
BasisConfig select_reference(const SnapshotPool& bootstrap_pool,
                             const CommitteeConfig& committee_cfg,
                             const TrainConfig& train_cfg, GateFamily family,
                             std::uint64_t seed, int per_basis_cap = 100);

// The structure score behind select_reference, exposed for diagnostics.
double amplitude_structure(const std::vector<StateVector>& members);

enum class DisagreementKind { Amplitude, Phase };

struct DisagreementScores {
    double amplitude = 0.0;
    double phase = 0.0;
    DisagreementKind winner = DisagreementKind::Amplitude;
};

// Amplitude score: summed entrywise variance of |psi_i(x)| across
// members. Phase score: summed circular variance of member phases taken
// relative to each member's own largest-mean-amplitude component, which
// removes the arbitrary global phase. Amplitude wins ties.
DisagreementScores disagreement_amplitude_vs_phase(const std::vector<StateVector>& members);

// Query-by-committee pick: the candidate whose rotated outcome
// distributions have the largest summed variance across members.
// Ties go to the lexicographically smallest config string.
BasisConfig select_query_config(const std::vector<StateVector>& members,
                                const std::vector<BasisConfig>& candidates,
                                const BasisConfig& reference, GateFamily family);

// All 3^N configs when that fits under `cap`, otherwise a seeded random
// cap-sized subset that always contains the three uniform configs.
std::vector<BasisConfig> candidate_configs(int num_qubits, int cap, Rng& rng);

struct FidelityStop {
    double threshold = 0.9;  // on the member-mean rescaled fidelity
};
struct XxzCorrelatorStop {
    double fraction = 2.0 / 3.0;  // of each target nn correlator, sign included
};
struct KcsObservablesStop {
    double density_tol = 0.2;
    double correlator_tol = 0.2;
};
using StoppingRule = std::variant<FidelityStop, XxzCorrelatorStop, KcsObservablesStop>;

struct QueryPolicy {
    int n_per_query = 1;
    int reference_multiplier = 3;
    int max_queries = 30;
    int candidate_cap = 0;  // 0 resolves to min(2^N, 256)
    int bootstrap_per_basis = 100;
    int selection_sample_cap = 100;  // per-basis cap inside select_reference
    StoppingRule stop = FidelityStop{};
};

void validate(const QueryPolicy& policy, int num_qubits);
int resolve_candidate_cap(const QueryPolicy& policy, int num_qubits);

// Known-target context for stopping rules and learning curves; empty for
// replay data without a reference solution.
struct EvaluationContext {
    std::optional<StateVector> target;
};

struct QueryRecord {
    int query = 0;  // 1-based
    BasisConfig config;
    int added = 0;
    std::string rule;  // "4a", "4b" or "forced"
};

struct LearnerState {
    BasisConfig reference;
    SnapshotPool pool;
    std::vector<QueryRecord> query_log;
    int bootstrap_kept = 0;  // reference-basis snapshots retained from bootstrap

    int n_tot() const { return static_cast<int>(pool.size()); }
    int n_queries() const { return static_cast<int>(query_log.size()); }
    int n_config() const { return pool.num_configs(); }
};

enum class StopStatus { RuleMet, QueryBudgetExhausted };

struct CurvePoint {
    int cycle = 0;
    int epoch = 0;  // global across cycles
    int member = 0;
    double one_minus_rescaled_fidelity = std::numeric_limits<double>::quiet_NaN();
    double kl = 0.0;
    int n_samples = 0;
};
using CurveObserver = std::function<void(const CurvePoint&)>;

// Per-epoch diagnostic cadence for curve observers; metric evaluation
// happens every `eval_every` epochs and always on the final epoch.
struct ObserverOptions {
    int eval_every = 1;
};

struct AlResult {
    LearnerState learner;
    Committee committee;
    StopStatus status = StopStatus::RuleMet;
    std::vector<StateVector> member_states;  // reference frame, final cycle
    int cycles = 0;
};

std::vector<Snapshot> bootstrap(MeasurementSource& source, int per_basis);

AlResult al_loop(MeasurementSource& source, const QueryPolicy& policy,
                 const CommitteeConfig& committee_cfg, const TrainConfig& train_cfg,
                 GateFamily family, const EvaluationContext& eval, std::uint64_t seed,
                 const CurveObserver& observer = nullptr,
                 const ObserverOptions& observer_opts = {});

// Sample budget extracted from a finished AL run: same total and same
// config count, non-reference configs replaced by random ones, reference
// pinned to the all-z default.
struct BaselineBudget {
    BasisConfig reference;
    std::vector<std::pair<BasisConfig, int>> per_config;

    int n_tot() const;
    int n_config() const { return static_cast<int>(per_config.size()); }
};

// Remaps per-config sample counts from an AL pool: the AL reference slot
// becomes the all-z default, every other config a fresh random one.
BaselineBudget make_baseline_budget(int num_qubits, const BasisConfig& al_reference,
                                    const std::vector<std::pair<BasisConfig, int>>& counts,
                                    Rng& rng);
BaselineBudget budget_from_learner(const LearnerState& learner, Rng& rng);

// Distinct uniformly random config strings avoiding `exclude`.
std::vector<BasisConfig> random_distinct_configs(int num_qubits, int count,
                                                 const std::vector<BasisConfig>& exclude,
                                                 Rng& rng);

struct BaselineResult {
    LearnerState learner;  // query_log empty; pool drawn per budget
    Committee committee;
    std::vector<StateVector> member_states;
};

BaselineResult baseline_run(MeasurementSource& source, const BaselineBudget& budget,
                            const CommitteeConfig& committee_cfg,
                            const TrainConfig& train_cfg, GateFamily family,
                            std::uint64_t seed, const CurveObserver& observer = nullptr,
                            const ObserverOptions& observer_opts = {},
                            const EvaluationContext& eval = {});

// Member-mean metric helpers shared by the loop and the harness.
double mean_rescaled_fidelity(const std::vector<StateVector>& member_states,
                              const BasisConfig& reference, GateFamily family,
                              const StateVector& target);

bool stopping_met(const StoppingRule& rule, const std::vector<StateVector>& member_states,
                  const BasisConfig& reference, GateFamily family,
                  const EvaluationContext& eval);

} // namespace alqst

#endif
