#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "alqst/harness.hpp"

using namespace alqst;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "alqst_harness_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

ExperimentConfig small_zspins_config(const std::filesystem::path& out) {
    ExperimentConfig config;
    config.mode = RunMode::Al;
    config.target.kind = "z_spins";
    config.target.num_qubits = 3;
    config.policy.bootstrap_per_basis = 4;
    config.policy.max_queries = 3;
    config.policy.stop = FidelityStop{0.9};
    config.train.epochs = 250;
    config.train.cd_steps = 5;
    config.committee.n_members = 2;
    config.seeds = {5};
    config.eval_every = 20;
    config.out_dir = out;
    return config;
}

} // namespace

TEST_CASE("config parsing resolves defaults by target kind") {
    const std::string text =
        "mode = \"al\"\n"
        "seeds = [3, 4]\n"
        "[target]\n"
        "kind = \"kcs\"\n"
        "length = 7\n"
        "field = 1.0\n"
        "chemical_potential = 1.0\n";
    ExperimentConfig config = config_from_table(toml::parse(text), ".");
    CHECK(config.mode == RunMode::Al);
    CHECK(config.target.kind == "kcs");
    CHECK(config.target.kcs.length == 7);
    CHECK(config.policy.n_per_query == 2);  // KCS default
    CHECK(std::holds_alternative<KcsObservablesStop>(config.policy.stop));
    CHECK(config.seeds == std::vector<std::uint64_t>{3, 4});

    const std::string xxz =
        "[target]\nkind = \"xxz\"\nlength = 6\nanisotropy = -1.0\n";
    ExperimentConfig xxz_config = config_from_table(toml::parse(xxz), ".");
    CHECK(xxz_config.policy.n_per_query == 50);
    CHECK(std::holds_alternative<XxzCorrelatorStop>(xxz_config.policy.stop));

    const std::string named = "[target]\nkind = \"ghz_phi\"\n";
    ExperimentConfig named_config = config_from_table(toml::parse(named), ".");
    CHECK(named_config.policy.n_per_query == 1);
    CHECK(std::holds_alternative<FidelityStop>(named_config.policy.stop));
}

TEST_CASE("config validation rejects inconsistent setups") {
    ExperimentConfig config;
    config.seeds.clear();
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = ExperimentConfig{};
    config.target.kind = "unknown";
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = ExperimentConfig{};
    config.data.source = "replay";
    config.data.snapshot_file = "/nonexistent/path.txt";
    CHECK_THROWS_AS(validate(config), std::invalid_argument);

    config = ExperimentConfig{};
    config.mode = RunMode::Sweep;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);  // empty values

    config = ExperimentConfig{};
    config.mode = RunMode::Baseline;
    CHECK_THROWS_AS(validate(config), std::invalid_argument);  // missing budget_from
}

TEST_CASE("al mode writes the full output contract") {
    const auto out = temp_dir("al_outputs");
    const ExperimentConfig config = small_zspins_config(out);
    const int code = run_experiment(config);
    CHECK(code == 0);

    CHECK(std::filesystem::exists(out / "manifest.json"));
    CHECK(std::filesystem::exists(out / "summary.json"));
    const auto seed_dir = out / "seed_5";
    CHECK(std::filesystem::exists(seed_dir / "learning_curve.csv"));
    CHECK(std::filesystem::exists(seed_dir / "query_log.json"));
    CHECK(std::filesystem::exists(seed_dir / "summary.json"));
    CHECK(std::filesystem::exists(seed_dir / "observables.json"));
    CHECK(std::filesystem::exists(seed_dir / "member_0.json"));
    CHECK(std::filesystem::exists(seed_dir / "member_1.json"));

    const std::string curve = slurp(seed_dir / "learning_curve.csv");
    CHECK(curve.rfind("seed,epoch,member,one_minus_rescaled_fidelity,kl,n_samples\n",
                      0) == 0);

    // the manifest pins every resolved default
    const std::string manifest = slurp(out / "manifest.json");
    for (const char* key :
         {"candidate_cap", "init_scale", "reference_multiplier", "bit_ordering",
          "selection_sample_cap", "baseline_reference", "eval_every"}) {
        CHECK(manifest.find(key) != std::string::npos);
    }
}

TEST_CASE("identical configs reproduce byte-identical outputs") {
    const auto out_a = temp_dir("repro_a");
    const auto out_b = temp_dir("repro_b");
    ExperimentConfig config = small_zspins_config(out_a);
    run_experiment(config);
    config.out_dir = out_b;
    run_experiment(config);
    CHECK(slurp(out_a / "seed_5" / "learning_curve.csv") ==
          slurp(out_b / "seed_5" / "learning_curve.csv"));
    CHECK(slurp(out_a / "seed_5" / "query_log.json") ==
          slurp(out_b / "seed_5" / "query_log.json"));
}

TEST_CASE("compare mode enforces budget parity and pairs summaries") {
    const auto out = temp_dir("compare");
    ExperimentConfig config = small_zspins_config(out);
    config.mode = RunMode::Compare;
    const int code = run_experiment(config);
    CHECK(code == 0);
    CHECK(std::filesystem::exists(out / "seed_5" / "baseline" / "summary.json"));

    const auto al_summary = nlohmann::json::parse(slurp(out / "seed_5" / "summary.json"));
    const auto baseline_summary =
        nlohmann::json::parse(slurp(out / "seed_5" / "baseline" / "summary.json"));
    CHECK(al_summary.at("n_tot").get<int>() == baseline_summary.at("n_tot").get<int>());
    CHECK(al_summary.at("n_config").get<int>() ==
          baseline_summary.at("n_config").get<int>());
    CHECK(baseline_summary.at("reference").get<std::string>() == "zzz");
}

TEST_CASE("replay data reproduces identical results across invocations") {
    const auto out_a = temp_dir("replay_a");
    const auto out_b = temp_dir("replay_b");
    const auto data_dir = temp_dir("replay_data");

    // record a generous pool from the simulator, then replay it
    const StateVector target = named_state(NamedState::ZSpins, 3);
    Rng rng = make_rng(77, 0xda7a);
    SnapshotPool pool;
    pool.num_qubits = 3;
    for (Axis axis : {Axis::Z, Axis::X, Axis::Y}) {
        for (const auto& snapshot : born_sample(target, BasisConfig::uniform(axis, 3),
                                                GateFamily::RotXY, 40, rng)) {
            pool.add(snapshot);
        }
    }
    const auto pool_path = data_dir / "pool.txt";
    write_snapshots(pool_path, pool);

    ExperimentConfig config = small_zspins_config(out_a);
    config.data.source = "replay";
    config.data.snapshot_file = pool_path;
    config.policy.max_queries = 2;
    run_experiment(config);
    config.out_dir = out_b;
    run_experiment(config);
    CHECK(slurp(out_a / "seed_5" / "learning_curve.csv") ==
          slurp(out_b / "seed_5" / "learning_curve.csv"));
}

TEST_CASE("replay exhaustion aborts with a clear error") {
    const auto data_dir = temp_dir("replay_short");
    SnapshotPool pool;
    pool.num_qubits = 3;
    pool.add(Snapshot{BasisConfig("zzz"), 7});  // far too little for bootstrap
    const auto pool_path = data_dir / "pool.txt";
    write_snapshots(pool_path, pool);

    ExperimentConfig config = small_zspins_config(temp_dir("replay_short_out"));
    config.data.source = "replay";
    config.data.snapshot_file = pool_path;
    CHECK_THROWS(run_experiment(config));
}

TEST_CASE("sweep emits one row per grid value") {
    const auto out = temp_dir("sweep");
    ExperimentConfig config = small_zspins_config(out);
    config.mode = RunMode::Sweep;
    config.sweep.axis = "n_samples";
    config.sweep.values = {8, 16};
    config.sweep.fixed_configs = 2;
    config.seeds = {5, 6};
    const int code = run_experiment(config);
    CHECK(code == 0);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(csv.rfind("value,mean_rescaled_fidelity,std_rescaled_fidelity,n_runs\n", 0) ==
          0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("standalone baseline reuses a recorded budget") {
    const auto al_out = temp_dir("budget_src");
    ExperimentConfig config = small_zspins_config(al_out);
    run_experiment(config);

    ExperimentConfig baseline = small_zspins_config(temp_dir("budget_replayed"));
    baseline.mode = RunMode::Baseline;
    baseline.baseline_budget_from = al_out;
    const int code = run_experiment(baseline);
    CHECK(code == 0);
    const auto summary = nlohmann::json::parse(
        slurp(baseline.out_dir / "seed_5" / "summary.json"));
    const auto al_summary =
        nlohmann::json::parse(slurp(al_out / "seed_5" / "summary.json"));
    CHECK(summary.at("n_tot").get<int>() == al_summary.at("n_tot").get<int>());
}
