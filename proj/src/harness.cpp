#include "alqst/harness.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

namespace alqst {

namespace {

constexpr const char* kVersion = "alqst 0.1.0";

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct Stats {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double std_dev = 0.0;
    double sem = 0.0;
};

Stats stats_of(const std::vector<double>& values) {
    Stats stats;
    if (values.empty()) {
        return stats;
    }
    double acc = 0.0;
    for (double v : values) {
        acc += v;
    }
    stats.mean = acc / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) {
            sq += (v - stats.mean) * (v - stats.mean);
        }
        stats.std_dev = std::sqrt(sq / static_cast<double>(values.size() - 1));
        stats.sem = stats.std_dev / std::sqrt(static_cast<double>(values.size()));
    }
    return stats;
}

nlohmann::json stats_json(const std::vector<double>& values) {
    const Stats stats = stats_of(values);
    return nlohmann::json{
        {"mean", stats.mean}, {"std", stats.std_dev}, {"sem", stats.sem},
        {"values", values}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& json) {
    std::ofstream out(path, std::ios::out | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << json.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    nlohmann::json json;
    in >> json;
    return json;
}

template <typename Fn>
void parallel_for(int workers, int count, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const int thread_count = std::min(workers, count);
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& thread : pool) {
        thread.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace

RunMode run_mode_from_string(const std::string& name) {
    if (name == "al") return RunMode::Al;
    if (name == "baseline") return RunMode::Baseline;
    if (name == "compare") return RunMode::Compare;
    if (name == "sweep") return RunMode::Sweep;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::Al: return "al";
    case RunMode::Baseline: return "baseline";
    case RunMode::Compare: return "compare";
    default: return "sweep";
    }
}

ExperimentConfig config_from_table(const toml::Table& table,
                                   const std::filesystem::path& base_dir) {
    ExperimentConfig config;
    if (auto mode = table.get("mode")) {
        config.mode = run_mode_from_string(mode->as_string());
    }
    if (auto family = table.get("gate_family")) {
        config.family = gate_family_from_string(family->as_string());
    }
    if (auto seeds = table.get("seeds")) {
        config.seeds.clear();
        for (double s : seeds->as_number_array()) {
            config.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (auto out = table.get("out_dir")) {
        config.out_dir = base_dir / out->as_string();
    }
    if (auto workers = table.get("workers")) {
        config.workers = static_cast<int>(workers->as_integer());
    }
    if (auto every = table.get("eval_every")) {
        config.eval_every = static_cast<int>(every->as_integer());
    }

    if (auto kind = table.get("target.kind")) {
        config.target.kind = kind->as_string();
    }
    if (auto n = table.get("target.num_qubits")) {
        config.target.num_qubits = static_cast<int>(n->as_integer());
    }
    if (auto length = table.get("target.length")) {
        config.target.xxz.length = static_cast<int>(length->as_integer());
        config.target.kcs.length = static_cast<int>(length->as_integer());
    }
    if (auto coupling = table.get("target.coupling")) {
        config.target.xxz.coupling = coupling->as_number();
    }
    if (auto anisotropy = table.get("target.anisotropy")) {
        config.target.xxz.anisotropy = anisotropy->as_number();
    }
    if (auto hopping = table.get("target.hopping")) {
        config.target.kcs.hopping = hopping->as_number();
    }
    if (auto field = table.get("target.field")) {
        config.target.kcs.field = field->as_number();
    }
    if (auto mu = table.get("target.chemical_potential")) {
        config.target.kcs.chemical_potential = mu->as_number();
    }

    if (auto source = table.get("data.source")) {
        config.data.source = source->as_string();
    }
    if (auto path = table.get("data.snapshot_file")) {
        config.data.snapshot_file = base_dir / path->as_string();
    }

    // per-target-kind defaults, overridable below
    if (config.target.kind == "xxz") {
        config.policy.n_per_query = 50;
        config.policy.stop = XxzCorrelatorStop{};
    } else if (config.target.kind == "kcs") {
        config.policy.n_per_query = 2;
        config.policy.stop = KcsObservablesStop{};
    } else {
        config.policy.n_per_query = 1;
        config.policy.stop = FidelityStop{};
    }

    if (auto v = table.get("policy.n_per_query")) {
        config.policy.n_per_query = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.reference_multiplier")) {
        config.policy.reference_multiplier = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.max_queries")) {
        config.policy.max_queries = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.candidate_cap")) {
        config.policy.candidate_cap = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.bootstrap_per_basis")) {
        config.policy.bootstrap_per_basis = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.selection_sample_cap")) {
        config.policy.selection_sample_cap = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("policy.stop")) {
        const std::string name = v->as_string();
        if (name == "fidelity") {
            config.policy.stop = FidelityStop{};
        } else if (name == "xxz_correlator") {
            config.policy.stop = XxzCorrelatorStop{};
        } else if (name == "kcs_observables") {
            config.policy.stop = KcsObservablesStop{};
        } else {
            throw std::invalid_argument("unknown stopping rule '" + name + "'");
        }
    }
    if (auto v = table.get("policy.stop_threshold")) {
        if (auto* stop = std::get_if<FidelityStop>(&config.policy.stop)) {
            stop->threshold = v->as_number();
        } else {
            throw std::invalid_argument("stop_threshold applies to the fidelity rule");
        }
    }
    if (auto v = table.get("policy.stop_fraction")) {
        if (auto* stop = std::get_if<XxzCorrelatorStop>(&config.policy.stop)) {
            stop->fraction = v->as_number();
        } else {
            throw std::invalid_argument("stop_fraction applies to the xxz_correlator rule");
        }
    }
    if (auto v = table.get("policy.stop_density_tol")) {
        if (auto* stop = std::get_if<KcsObservablesStop>(&config.policy.stop)) {
            stop->density_tol = v->as_number();
        } else {
            throw std::invalid_argument("stop_density_tol applies to the kcs_observables rule");
        }
    }
    if (auto v = table.get("policy.stop_correlator_tol")) {
        if (auto* stop = std::get_if<KcsObservablesStop>(&config.policy.stop)) {
            stop->correlator_tol = v->as_number();
        } else {
            throw std::invalid_argument(
                "stop_correlator_tol applies to the kcs_observables rule");
        }
    }

    if (auto v = table.get("train.epochs")) {
        config.train.epochs = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("train.learning_rate")) {
        config.train.learning_rate = v->as_number();
    }
    if (auto v = table.get("train.cd_steps")) {
        config.train.cd_steps = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("train.batch_size")) {
        config.train.batch_size = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("train.init_scale")) {
        config.train.init_scale = v->as_number();
    }

    if (auto v = table.get("committee.n_members")) {
        config.committee.n_members = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("committee.hidden_per_visible")) {
        config.committee.hidden_per_visible = static_cast<int>(v->as_integer());
    }
    config.committee.init_scale = config.train.init_scale;

    if (auto v = table.get("ground.tolerance")) {
        config.ground.tolerance = v->as_number();
    }
    if (auto v = table.get("ground.max_iterations")) {
        config.ground.max_iterations = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("ground.krylov_dim")) {
        config.ground.krylov_dim = static_cast<int>(v->as_integer());
    }

    if (auto v = table.get("sweep.axis")) {
        config.sweep.axis = v->as_string();
    }
    if (auto v = table.get("sweep.values")) {
        config.sweep.values.clear();
        for (double value : v->as_number_array()) {
            config.sweep.values.push_back(static_cast<int>(value));
        }
    }
    if (auto v = table.get("sweep.n_configs")) {
        config.sweep.fixed_configs = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("sweep.n_samples")) {
        config.sweep.fixed_samples = static_cast<int>(v->as_integer());
    }
    if (auto v = table.get("baseline.budget_from")) {
        config.baseline_budget_from = base_dir / v->as_string();
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    ExperimentConfig config =
        config_from_table(toml::parse_file(path), path.parent_path());
    validate(config);
    return config;
}

void validate(const ExperimentConfig& config) {
    if (config.seeds.empty()) {
        throw std::invalid_argument("config needs at least one seed");
    }
    if (config.workers < 1 || config.eval_every < 1) {
        throw std::invalid_argument("workers and eval_every must be >= 1");
    }
    const std::string& kind = config.target.kind;
    if (kind != "ghz" && kind != "ghz_phi" && kind != "z_spins" && kind != "x_spins" &&
        kind != "xxz" && kind != "kcs" && kind != "none") {
        throw std::invalid_argument("unknown target kind '" + kind + "'");
    }
    if (config.data.source != "simulator" && config.data.source != "replay") {
        throw std::invalid_argument("data source must be simulator or replay");
    }
    if (config.data.source == "replay" &&
        !std::filesystem::exists(config.data.snapshot_file)) {
        throw std::invalid_argument("snapshot file does not exist: " +
                                    config.data.snapshot_file.string());
    }
    if (config.data.source == "simulator" && kind == "none") {
        throw std::invalid_argument("simulator data needs a concrete target kind");
    }
    if (kind == "none" &&
        (config.mode == RunMode::Al || config.mode == RunMode::Compare ||
         config.mode == RunMode::Sweep)) {
        throw std::invalid_argument(
            "al, compare and sweep modes need a known target for their stopping "
            "rules and metrics");
    }
    if (config.mode == RunMode::Sweep && config.sweep.values.empty()) {
        throw std::invalid_argument("sweep mode needs a nonempty values list");
    }
    if (config.mode == RunMode::Sweep && config.sweep.axis != "n_samples" &&
        config.sweep.axis != "n_configs") {
        throw std::invalid_argument("sweep axis must be n_samples or n_configs");
    }
    if (config.mode == RunMode::Baseline && config.baseline_budget_from.empty()) {
        throw std::invalid_argument(
            "baseline mode needs baseline.budget_from pointing at an al run");
    }
}

ResolvedTarget resolve_target(const TargetSpec& target, const DataSpec& data,
                              const GroundStateOptions& ground) {
    ResolvedTarget resolved;
    if (target.kind == "ghz" || target.kind == "ghz_phi" || target.kind == "z_spins" ||
        target.kind == "x_spins") {
        resolved.state = named_state(named_state_from_string(target.kind),
                                     target.num_qubits);
    } else if (target.kind == "xxz") {
        Rng rng = make_rng(0xed, static_cast<std::uint64_t>(target.xxz.length));
        resolved.ground = ground_state(target.xxz, ground, rng);
        resolved.state = resolved.ground->state;
    } else if (target.kind == "kcs") {
        Rng rng = make_rng(0xed, static_cast<std::uint64_t>(target.kcs.length));
        resolved.ground = ground_state(target.kcs, ground, rng);
        resolved.state = resolved.ground->state;
    }
    if (data.source == "replay") {
        resolved.replay_pool = read_snapshots(data.snapshot_file);
        if (resolved.state.has_value() &&
            resolved.replay_pool->num_qubits != resolved.state->num_qubits) {
            throw std::invalid_argument(
                "snapshot file qubit count does not match the target");
        }
    }
    return resolved;
}

std::unique_ptr<MeasurementSource> make_source(const ResolvedTarget& target,
                                               const DataSpec& data, GateFamily family,
                                               std::uint64_t seed) {
    if (data.source == "replay") {
        return std::make_unique<ReplaySource>(*target.replay_pool);
    }
    return std::make_unique<SimulatorSource>(*target.state, family,
                                             make_rng(seed, 0xda7a));
}

nlohmann::json report_to_json(const ObservableReport& report) {
    nlohmann::json json{
        {"correlators",
         {{"x", report.correlator_x}, {"y", report.correlator_y}, {"z", report.correlator_z}}},
        {"density",
         std::vector<double>(report.density.data(),
                             report.density.data() + report.density.size())},
        {"n_tot", report.n_tot},
        {"greens",
         std::vector<double>(report.greens.data(),
                             report.greens.data() + report.greens.size())},
        {"k_fermi", report.k_fermi},
        {"decay",
         {{"r_squared_power", report.decay.r_squared_power},
          {"r_squared_exponential", report.decay.r_squared_exponential},
          {"points_used", report.decay.points_used},
          {"classification", report.decay.classification}}},
    };
    if (report.rescaled_fidelity.has_value()) {
        json["rescaled_fidelity"] = *report.rescaled_fidelity;
    }
    if (report.kl.has_value()) {
        json["kl"] = *report.kl;
    }
    return json;
}

namespace {

nlohmann::json stop_to_json(const StoppingRule& stop) {
    if (const auto* fidelity_stop = std::get_if<FidelityStop>(&stop)) {
        return {{"rule", "fidelity"}, {"threshold", fidelity_stop->threshold}};
    }
    if (const auto* xxz_stop = std::get_if<XxzCorrelatorStop>(&stop)) {
        return {{"rule", "xxz_correlator"}, {"fraction", xxz_stop->fraction}};
    }
    const auto& kcs_stop = std::get<KcsObservablesStop>(stop);
    return {{"rule", "kcs_observables"},
            {"density_tol", kcs_stop.density_tol},
            {"correlator_tol", kcs_stop.correlator_tol}};
}

nlohmann::json target_to_json(const ExperimentConfig& config,
                              const ResolvedTarget& resolved) {
    nlohmann::json json{{"kind", config.target.kind}};
    if (config.target.kind == "xxz") {
        json["length"] = config.target.xxz.length;
        json["coupling"] = config.target.xxz.coupling;
        json["anisotropy"] = config.target.xxz.anisotropy;
    } else if (config.target.kind == "kcs") {
        json["length"] = config.target.kcs.length;
        json["hopping"] = config.target.kcs.hopping;
        json["field"] = config.target.kcs.field;
        json["chemical_potential"] = config.target.kcs.chemical_potential;
    } else if (config.target.kind != "none") {
        json["num_qubits"] = config.target.num_qubits;
    }
    if (resolved.ground.has_value()) {
        json["ground_energy"] = resolved.ground->energy;
        json["ground_residual"] = resolved.ground->residual_norm;
    }
    if (resolved.state.has_value()) {
        json["sz_total"] = total_sz(*resolved.state);
        if (resolved.state->num_qubits >= 3) {
            json["n_tot"] = total_density(*resolved.state);
        }
    }
    return json;
}

int resolved_qubits(const ResolvedTarget& resolved) {
    if (resolved.state.has_value()) {
        return resolved.state->num_qubits;
    }
    return resolved.replay_pool->num_qubits;
}

void write_manifest(const ExperimentConfig& config, const ResolvedTarget& resolved) {
    const int n = resolved_qubits(resolved);
    const double init_scale = config.train.init_scale > 0.0
                                  ? config.train.init_scale
                                  : default_init_scale(n);
    nlohmann::json manifest{
        {"version", kVersion},
        {"mode", to_string(config.mode)},
        {"gate_family", to_string(config.family)},
        {"seeds", config.seeds},
        {"workers", config.workers},
        {"eval_every", config.eval_every},
        {"target", target_to_json(config, resolved)},
        {"data",
         {{"source", config.data.source},
          {"snapshot_file", config.data.snapshot_file.string()}}},
        {"policy",
         {{"n_per_query", config.policy.n_per_query},
          {"reference_multiplier", config.policy.reference_multiplier},
          {"max_queries", config.policy.max_queries},
          {"candidate_cap", resolve_candidate_cap(config.policy, n)},
          {"bootstrap_per_basis", config.policy.bootstrap_per_basis},
          {"selection_sample_cap", config.policy.selection_sample_cap},
          {"stop", stop_to_json(config.policy.stop)}}},
        {"train",
         {{"epochs", config.train.epochs},
          {"learning_rate", config.train.learning_rate},
          {"cd_steps", config.train.cd_steps},
          {"batch_size", config.train.batch_size},
          {"init_scale", init_scale}}},
        {"committee",
         {{"n_members", config.committee.n_members},
          {"hidden_per_visible", config.committee.hidden_per_visible}}},
        {"ground",
         {{"tolerance", config.ground.tolerance},
          {"max_iterations", config.ground.max_iterations},
          {"krylov_dim", config.ground.krylov_dim}}},
        {"conventions",
         {{"bit_ordering", "qubit 0 is the most significant index bit"},
          {"boundary_conditions", "open"},
          {"reference_tie_break", "z, x, y"},
          {"selection_training", "full epochs on the capped bootstrap pool"},
          {"selection_score", "entry variance of the committee-mean amplitude vector"},
          {"baseline_reference", std::string(n, 'z')},
          {"phase_gauge", "largest mean-amplitude anchor"},
          {"forced_orthogonals", "queued after two consecutive reference queries"},
          {"sweep_split", "even across configs, remainder to the reference"},
          {"batch_rule", "full pool when smaller than batch_size"}}},
    };
    if (config.mode == RunMode::Sweep) {
        manifest["sweep"] = {{"axis", config.sweep.axis},
                             {"values", config.sweep.values},
                             {"n_configs", config.sweep.fixed_configs},
                             {"n_samples", config.sweep.fixed_samples}};
    }
    write_json(config.out_dir / "manifest.json", manifest);
}

void write_curve(const std::filesystem::path& path, std::uint64_t seed,
                 const std::vector<CurvePoint>& curve) {
    std::ofstream out(path, std::ios::out | std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << "seed,epoch,member,one_minus_rescaled_fidelity,kl,n_samples\n";
    for (const CurvePoint& point : curve) {
        out << seed << ',' << point.epoch << ',' << point.member << ','
            << format_double(point.one_minus_rescaled_fidelity) << ','
            << format_double(point.kl) << ',' << point.n_samples << "\n";
    }
}

void write_query_log(const std::filesystem::path& path,
                     const std::vector<QueryRecord>& log) {
    nlohmann::json entries = nlohmann::json::array();
    for (const QueryRecord& record : log) {
        entries.push_back({{"query", record.query},
                           {"config", record.config.str()},
                           {"added", record.added},
                           {"rule", record.rule}});
    }
    write_json(path, entries);
}

void write_members(const std::filesystem::path& dir, const Committee& committee,
                   const BasisConfig& reference, GateFamily family, int epochs) {
    for (int m = 0; m < committee.size(); ++m) {
        RbmCheckpoint checkpoint;
        checkpoint.wavefunction = committee.members[m];
        checkpoint.reference = reference;
        checkpoint.family = family;
        checkpoint.seed = committee.member_seeds[m];
        checkpoint.epoch = epochs;
        write_rbm_checkpoint(dir / ("member_" + std::to_string(m) + ".json"), checkpoint);
    }
}

// final per-member diagnostics plus pooled observables
struct SeedMetrics {
    std::vector<double> member_fidelity;  // rescaled; empty without target
    std::vector<double> member_kl;
    double density_diff = std::numeric_limits<double>::quiet_NaN();
    double greens_diff = std::numeric_limits<double>::quiet_NaN();
};

SeedMetrics finalize_seed(const std::filesystem::path& dir,
                          const std::vector<StateVector>& states,
                          const SnapshotPool& pool, const BasisConfig& reference,
                          GateFamily family, const ResolvedTarget& resolved) {
    SeedMetrics metrics;
    const EmpiricalDistribution empirical = EmpiricalDistribution::from_pool(pool);
    nlohmann::json members_json = nlohmann::json::array();
    Eigen::VectorXd mean_density, mean_greens;
    for (const StateVector& state : states) {
        const StateVector physical = reconstructed_state(state, reference, family);
        ObservableReport report = observable_report(physical);
        report.kl = kl_divergence(empirical, state, reference, family);
        if (resolved.state.has_value()) {
            report.rescaled_fidelity = rescaled_fidelity(
                fidelity(physical, *resolved.state), physical.num_qubits);
            metrics.member_fidelity.push_back(*report.rescaled_fidelity);
        }
        metrics.member_kl.push_back(*report.kl);
        members_json.push_back(report_to_json(report));
        if (mean_density.size() == 0) {
            mean_density = report.density;
            mean_greens = report.greens;
        } else {
            mean_density += report.density;
            mean_greens += report.greens;
        }
    }
    mean_density /= static_cast<double>(states.size());
    mean_greens /= static_cast<double>(states.size());

    nlohmann::json observables{{"members", members_json}};
    observables["member_mean"] = {
        {"density",
         std::vector<double>(mean_density.data(), mean_density.data() + mean_density.size())},
        {"greens",
         std::vector<double>(mean_greens.data(), mean_greens.data() + mean_greens.size())},
    };
    if (resolved.state.has_value()) {
        const ObservableReport target_report = observable_report(*resolved.state);
        observables["target"] = report_to_json(target_report);
        metrics.density_diff = relative_diff(mean_density, target_report.density);
        metrics.greens_diff = relative_diff(mean_greens, target_report.greens);
        observables["member_mean"]["density_relative_diff"] = metrics.density_diff;
        observables["member_mean"]["greens_relative_diff"] = metrics.greens_diff;
    }
    write_json(dir / "observables.json", observables);
    return metrics;
}

nlohmann::json pool_counts_json(const SnapshotPool& pool) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [config, outcomes] : pool.grouped_by_config()) {
        counts[config.str()] = outcomes.size();
    }
    return counts;
}

struct SeedOutcome {
    std::uint64_t seed = 0;
    bool stop_met = true;
    SeedMetrics al;
    SeedMetrics baseline;
    bool has_baseline = false;
};

SeedMetrics run_baseline_for_seed(const std::filesystem::path& dir,
                                  const ExperimentConfig& config,
                                  const ResolvedTarget& resolved,
                                  const BaselineBudget& budget, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    auto source = make_source(resolved, config.data, config.family, mix_seed(seed, 0xb1));
    EvaluationContext eval{resolved.state};
    std::vector<CurvePoint> curve;
    CurveObserver observer = [&curve](const CurvePoint& point) { curve.push_back(point); };
    const BaselineResult result =
        baseline_run(*source, budget, config.committee, config.train, config.family,
                     seed, observer, ObserverOptions{config.eval_every}, eval);
    write_curve(dir / "learning_curve.csv", seed, curve);
    write_members(dir, result.committee, budget.reference, config.family,
                  config.train.epochs);
    const SeedMetrics metrics =
        finalize_seed(dir, result.member_states, result.learner.pool, budget.reference,
                      config.family, resolved);
    nlohmann::json summary{
        {"seed", seed},
        {"mode", "baseline"},
        {"reference", budget.reference.str()},
        {"n_tot", result.learner.n_tot()},
        {"n_config", result.learner.n_config()},
        {"pool", pool_counts_json(result.learner.pool)},
        {"final",
         {{"rescaled_fidelity", stats_json(metrics.member_fidelity)},
          {"kl", stats_json(metrics.member_kl)}}},
    };
    if (!std::isnan(metrics.density_diff)) {
        summary["final"]["density_relative_diff"] = metrics.density_diff;
        summary["final"]["greens_relative_diff"] = metrics.greens_diff;
    }
    write_json(dir / "summary.json", summary);
    return metrics;
}

SeedOutcome run_al_for_seed(const ExperimentConfig& config,
                            const ResolvedTarget& resolved, std::uint64_t seed) {
    const std::filesystem::path dir =
        config.out_dir / ("seed_" + std::to_string(seed));
    std::filesystem::create_directories(dir);

    auto source = make_source(resolved, config.data, config.family, mix_seed(seed, 0xa1));
    EvaluationContext eval{resolved.state};
    std::vector<CurvePoint> curve;
    CurveObserver observer = [&curve](const CurvePoint& point) { curve.push_back(point); };
    const AlResult result =
        al_loop(*source, config.policy, config.committee, config.train, config.family,
                eval, seed, observer, ObserverOptions{config.eval_every});

    write_curve(dir / "learning_curve.csv", seed, curve);
    write_query_log(dir / "query_log.json", result.learner.query_log);
    write_members(dir, result.committee, result.learner.reference, config.family,
                  config.train.epochs);

    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.stop_met = result.status == StopStatus::RuleMet;
    outcome.al = finalize_seed(dir, result.member_states, result.learner.pool,
                               result.learner.reference, config.family, resolved);

    nlohmann::json summary{
        {"seed", seed},
        {"mode", "al"},
        {"reference", result.learner.reference.str()},
        {"stop_met", outcome.stop_met},
        {"exit_status", outcome.stop_met ? "rule_met" : "budget_exhausted"},
        {"n_tot", result.learner.n_tot()},
        {"n_queries", result.learner.n_queries()},
        {"n_config", result.learner.n_config()},
        {"bootstrap_kept", result.learner.bootstrap_kept},
        {"cycles", result.cycles},
        {"pool", pool_counts_json(result.learner.pool)},
        {"final",
         {{"rescaled_fidelity", stats_json(outcome.al.member_fidelity)},
          {"kl", stats_json(outcome.al.member_kl)}}},
    };
    if (!std::isnan(outcome.al.density_diff)) {
        summary["final"]["density_relative_diff"] = outcome.al.density_diff;
        summary["final"]["greens_relative_diff"] = outcome.al.greens_diff;
    }
    write_json(dir / "summary.json", summary);

    if (config.mode == RunMode::Compare) {
        Rng budget_rng = make_rng(seed, 0xb0d6);
        const BaselineBudget budget = budget_from_learner(result.learner, budget_rng);
        // budget parity is a hard contract
        if (budget.n_tot() != result.learner.n_tot() ||
            budget.n_config() != result.learner.n_config()) {
            throw std::runtime_error("budget parity violated for seed " +
                                     std::to_string(seed));
        }
        outcome.baseline =
            run_baseline_for_seed(dir / "baseline", config, resolved, budget, seed);
        outcome.has_baseline = true;
    }
    return outcome;
}

nlohmann::json aggregate_json(const std::vector<SeedOutcome>& outcomes,
                              bool baseline_side) {
    std::vector<double> fidelity_means, kl_means, density_diffs, greens_diffs;
    for (const SeedOutcome& outcome : outcomes) {
        const SeedMetrics& metrics = baseline_side ? outcome.baseline : outcome.al;
        if (!metrics.member_fidelity.empty()) {
            fidelity_means.push_back(stats_of(metrics.member_fidelity).mean);
        }
        if (!metrics.member_kl.empty()) {
            kl_means.push_back(stats_of(metrics.member_kl).mean);
        }
        if (!std::isnan(metrics.density_diff)) {
            density_diffs.push_back(metrics.density_diff);
            greens_diffs.push_back(metrics.greens_diff);
        }
    }
    nlohmann::json json{{"rescaled_fidelity", stats_json(fidelity_means)},
                        {"kl", stats_json(kl_means)}};
    if (!density_diffs.empty()) {
        json["density_relative_diff"] = stats_json(density_diffs);
        json["greens_relative_diff"] = stats_json(greens_diffs);
    }
    return json;
}

int run_al_or_compare(const ExperimentConfig& config, const ResolvedTarget& resolved) {
    std::vector<SeedOutcome> outcomes(config.seeds.size());
    parallel_for(config.workers, static_cast<int>(config.seeds.size()), [&](int i) {
        outcomes[i] = run_al_for_seed(config, resolved, config.seeds[i]);
    });
    bool all_met = true;
    nlohmann::json per_seed = nlohmann::json::array();
    for (const SeedOutcome& outcome : outcomes) {
        all_met = all_met && outcome.stop_met;
        nlohmann::json row{{"seed", outcome.seed},
                           {"stop_met", outcome.stop_met},
                           {"rescaled_fidelity_mean",
                            stats_of(outcome.al.member_fidelity).mean}};
        if (outcome.has_baseline) {
            row["baseline_rescaled_fidelity_mean"] =
                stats_of(outcome.baseline.member_fidelity).mean;
        }
        per_seed.push_back(row);
    }
    nlohmann::json aggregate{{"mode", to_string(config.mode)},
                             {"seeds", per_seed},
                             {"al", aggregate_json(outcomes, false)}};
    if (config.mode == RunMode::Compare) {
        aggregate["baseline"] = aggregate_json(outcomes, true);
    }
    aggregate["all_stopping_met"] = all_met;
    write_json(config.out_dir / "summary.json", aggregate);
    return all_met ? 0 : 2;
}

BaselineBudget budget_from_summary(const nlohmann::json& summary, int num_qubits,
                                   Rng& rng) {
    std::vector<std::pair<BasisConfig, int>> counts;
    for (const auto& [config_text, count] : summary.at("pool").items()) {
        counts.emplace_back(BasisConfig(config_text), count.get<int>());
    }
    return make_baseline_budget(num_qubits,
                                BasisConfig(summary.at("reference").get<std::string>()),
                                counts, rng);
}

int run_standalone_baseline(const ExperimentConfig& config,
                            const ResolvedTarget& resolved) {
    std::vector<SeedOutcome> outcomes(config.seeds.size());
    parallel_for(config.workers, static_cast<int>(config.seeds.size()), [&](int i) {
        const std::uint64_t seed = config.seeds[i];
        const std::filesystem::path al_summary = config.baseline_budget_from /
                                                 ("seed_" + std::to_string(seed)) /
                                                 "summary.json";
        Rng budget_rng = make_rng(seed, 0xb0d6);
        const BaselineBudget budget = budget_from_summary(
            read_json(al_summary), resolved_qubits(resolved), budget_rng);
        outcomes[i].seed = seed;
        outcomes[i].al = run_baseline_for_seed(
            config.out_dir / ("seed_" + std::to_string(seed)), config, resolved, budget,
            seed);
    });
    nlohmann::json aggregate{{"mode", "baseline"},
                             {"baseline", aggregate_json(outcomes, false)}};
    write_json(config.out_dir / "summary.json", aggregate);
    return 0;
}

int run_sweep(const ExperimentConfig& config, const ResolvedTarget& resolved) {
    const int n = resolved_qubits(resolved);
    std::ofstream csv(config.out_dir / "sweep.csv", std::ios::out | std::ios::binary);
    if (!csv) {
        throw std::runtime_error("cannot write sweep.csv");
    }
    csv << "value,mean_rescaled_fidelity,std_rescaled_fidelity,n_runs\n";
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t vi = 0; vi < config.sweep.values.size(); ++vi) {
        const int value = config.sweep.values[vi];
        const int total = config.sweep.axis == "n_samples" ? value
                                                           : config.sweep.fixed_samples;
        const int n_configs = config.sweep.axis == "n_samples"
                                  ? config.sweep.fixed_configs
                                  : value;
        if (total < n_configs || n_configs < 1) {
            throw std::invalid_argument("sweep point has fewer samples than configs");
        }
        std::vector<double> fidelities;  // pooled over seeds and members
        std::mutex fidelity_mutex;
        parallel_for(config.workers, static_cast<int>(config.seeds.size()), [&](int i) {
            const std::uint64_t seed = config.seeds[i];
            Rng budget_rng = make_rng(seed, 0x53e9 + static_cast<std::uint64_t>(vi));
            // reference plus random distinct configs, samples split evenly
            // with the remainder on the reference
            const int base = total / n_configs;
            BaselineBudget budget;
            budget.reference = BasisConfig::uniform(Axis::Z, n);
            budget.per_config.emplace_back(budget.reference, base + total % n_configs);
            for (const BasisConfig& config : random_distinct_configs(
                     n, n_configs - 1, {budget.reference}, budget_rng)) {
                budget.per_config.emplace_back(config, base);
            }
            const std::filesystem::path dir =
                config.out_dir / (config.sweep.axis + "_" + std::to_string(value)) /
                ("seed_" + std::to_string(seed));
            const SeedMetrics metrics =
                run_baseline_for_seed(dir, config, resolved, budget, seed);
            std::lock_guard<std::mutex> lock(fidelity_mutex);
            fidelities.insert(fidelities.end(), metrics.member_fidelity.begin(),
                              metrics.member_fidelity.end());
        });
        std::sort(fidelities.begin(), fidelities.end());  // schedule-independent order
        const Stats stats = stats_of(fidelities);
        csv << value << ',' << format_double(stats.mean) << ','
            << format_double(stats.std_dev) << ',' << fidelities.size() << "\n";
        rows.push_back({{"value", value},
                        {"mean_rescaled_fidelity", stats.mean},
                        {"std_rescaled_fidelity", stats.std_dev},
                        {"n_runs", fidelities.size()}});
    }
    write_json(config.out_dir / "summary.json",
               nlohmann::json{{"mode", "sweep"},
                              {"axis", config.sweep.axis},
                              {"rows", rows}});
    return 0;
}

} // namespace

int run_experiment(const ExperimentConfig& config) {
    validate(config);
    validate(config.train);
    std::filesystem::create_directories(config.out_dir);
    const ResolvedTarget resolved =
        resolve_target(config.target, config.data, config.ground);
    if (config.mode != RunMode::Baseline) {
        validate(config.policy, resolved_qubits(resolved));
    }
    write_manifest(config, resolved);
    switch (config.mode) {
    case RunMode::Al:
    case RunMode::Compare:
        return run_al_or_compare(config, resolved);
    case RunMode::Baseline:
        return run_standalone_baseline(config, resolved);
    case RunMode::Sweep:
        return run_sweep(config, resolved);
    }
    return 3;
}

} // namespace alqst
