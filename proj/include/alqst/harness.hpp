#ifndef ALQST_HARNESS_HPP
#define ALQST_HARNESS_HPP

#include <filesystem>

#include <json.hpp>

#include "alqst/committee.hpp"
#include "alqst/io.hpp"
#include "alqst/models.hpp"
#include "alqst/observables.hpp"
#include "alqst/toml.hpp"

namespace alqst {

enum class RunMode { Al, Baseline, Compare, Sweep };

RunMode run_mode_from_string(const std::string& name);
std::string to_string(RunMode mode);

struct TargetSpec {
    std::string kind = "ghz";  // ghz|ghz_phi|z_spins|x_spins|xxz|kcs|none
    int num_qubits = 5;
    XxzSpec xxz;
    KcsSpec kcs;
};

// Snapshots either come from Born sampling of the resolved target or
// from replaying a recorded snapshot file.
struct DataSpec {
    std::string source = "simulator";  // simulator | replay
    std::filesystem::path snapshot_file;
};

struct SweepSpec {
    std::string axis = "n_samples";  // n_samples | n_configs
    std::vector<int> values;
    int fixed_configs = 6;
    int fixed_samples = 2000;
};

struct ExperimentConfig {
    RunMode mode = RunMode::Al;
    TargetSpec target;
    DataSpec data;
    GateFamily family = GateFamily::RotXY;
    QueryPolicy policy;
    TrainConfig train;
    CommitteeConfig committee;
    GroundStateOptions ground;
    SweepSpec sweep;
    std::vector<std::uint64_t> seeds = {1};
    std::filesystem::path out_dir = "runs/out";
    std::filesystem::path baseline_budget_from;  // baseline mode: AL run root
    int workers = 1;
    int eval_every = 1;
};

ExperimentConfig config_from_table(const toml::Table& table,
                                   const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& config);

// Target state plus measurement data; `state` is empty for kind "none"
// (replayed data without a reference solution).
struct ResolvedTarget {
    std::optional<StateVector> state;
    std::optional<SnapshotPool> replay_pool;
    std::optional<GroundStateResult> ground;  // xxz/kcs targets
};

ResolvedTarget resolve_target(const TargetSpec& target, const DataSpec& data,
                              const GroundStateOptions& ground);

std::unique_ptr<MeasurementSource> make_source(const ResolvedTarget& target,
                                               const DataSpec& data, GateFamily family,
                                               std::uint64_t seed);

nlohmann::json report_to_json(const ObservableReport& report);

// Executes the configured mode for every seed, writes manifest.json,
// per-seed learning_curve.csv / query_log.json / summary.json /
// observables.json and an aggregate summary. Returns the process exit
// code: 0 if every AL seed met its stopping rule, 2 if any halted at the
// query budget.
int run_experiment(const ExperimentConfig& config);

} // namespace alqst

#endif
