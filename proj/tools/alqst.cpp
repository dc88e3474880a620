#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "alqst/harness.hpp"

namespace {

using namespace alqst;

struct StateArgs {
    std::string kind = "ghz";
    int num_qubits = 5;
    int length = 8;
    double coupling = 1.0;
    double anisotropy = 0.0;
    double hopping = 1.0;
    double field = 0.0;
    double chemical_potential = 0.0;
    double tolerance = 1e-8;
    int max_iterations = 4000;
    int krylov_dim = 30;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_state(const StateArgs& args) {
    StateVector state;
    if (args.kind == "xxz") {
        XxzSpec spec{args.length, args.coupling, args.anisotropy};
        Rng rng = make_rng(args.seed, 0xed);
        const GroundStateResult result = ground_state(
            spec, GroundStateOptions{args.tolerance, args.max_iterations, args.krylov_dim},
            rng);
        std::cout << "xxz L=" << args.length << " energy=" << result.energy
                  << " residual=" << result.residual_norm << "\n";
        state = result.state;
    } else if (args.kind == "kcs") {
        KcsSpec spec{args.length, args.hopping, args.field, args.chemical_potential};
        Rng rng = make_rng(args.seed, 0xed);
        const GroundStateResult result = ground_state(
            spec, GroundStateOptions{args.tolerance, args.max_iterations, args.krylov_dim},
            rng);
        std::cout << "kcs L=" << args.length << " energy=" << result.energy
                  << " residual=" << result.residual_norm
                  << " n_tot=" << total_density(result.state) << "\n";
        state = result.state;
    } else {
        state = named_state(named_state_from_string(args.kind), args.num_qubits);
    }
    write_statevector(args.out, state);
    std::cout << "wrote " << args.out << " (" << state.num_qubits << " qubits)\n";
    return 0;
}

struct SampleArgs {
    std::string state_path;
    std::vector<std::string> configs;
    int count = 100;
    std::string family = "rxy";
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_sample(const SampleArgs& args) {
    const StateVector state = read_statevector(args.state_path);
    const GateFamily family = gate_family_from_string(args.family);
    Rng rng = make_rng(args.seed, 0xda7a);
    SnapshotPool pool;
    pool.num_qubits = state.num_qubits;
    for (const std::string& config_text : args.configs) {
        for (const Snapshot& snapshot :
             born_sample(state, BasisConfig(config_text), family, args.count, rng)) {
            pool.add(snapshot);
        }
    }
    write_snapshots(args.out, pool);
    std::cout << "wrote " << pool.size() << " snapshots to " << args.out << "\n";
    return 0;
}

struct ObservablesArgs {
    std::string state_path;
    std::string rbm_path;
    std::string out_dir = ".";
};

int cmd_observables(const ObservablesArgs& args) {
    StateVector state;
    if (!args.rbm_path.empty()) {
        const RbmCheckpoint checkpoint = read_rbm_checkpoint(args.rbm_path);
        state = reconstructed_state(rbm_to_statevector(checkpoint.wavefunction),
                                    checkpoint.reference, checkpoint.family);
    } else if (!args.state_path.empty()) {
        state = read_statevector(args.state_path);
    } else {
        std::cerr << "observables needs --state or --rbm\n";
        return 3;
    }
    const ObservableReport report = observable_report(state);
    const std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream json(dir / "observables.json");
        json << report_to_json(report).dump(2) << "\n";
    }
    {
        std::ofstream density(dir / "density.csv");
        density << "j,n_j\n";
        for (Eigen::Index j = 0; j < report.density.size(); ++j) {
            density << (j + 1) << ',' << report.density[j] << "\n";
        }
    }
    {
        std::ofstream greens(dir / "greens.csv");
        greens << "d,c_d\n";
        for (Eigen::Index d = 0; d < report.greens.size(); ++d) {
            greens << d << ',' << report.greens[d] << "\n";
        }
    }
    std::cout << "n_tot=" << report.n_tot << " k_fermi=" << report.k_fermi
              << " decay=" << report.decay.classification << "\n";
    return 0;
}

struct RunArgs {
    std::string config_path;
    std::string out;
    std::string budget_from;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
};

int cmd_run(const RunArgs& args, RunMode mode) {
    ExperimentConfig config = load_config(args.config_path);
    config.mode = mode;
    if (args.seed_set) {
        config.seeds = {args.seed};
    }
    if (!args.out.empty()) {
        config.out_dir = args.out;
    }
    if (args.workers > 0) {
        config.workers = args.workers;
    }
    if (!args.budget_from.empty()) {
        config.baseline_budget_from = args.budget_from;
    }
    validate(config);
    const int code = run_experiment(config);
    std::cout << "run complete: " << config.out_dir.string() << " (exit " << code
              << ")\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive quantum state tomography with a committee of RBMs"};
    app.require_subcommand(1);

    StateArgs state_args;
    CLI::App* state_cmd = app.add_subcommand("state", "Build and serialize a target state");
    state_cmd->add_option("--kind", state_args.kind,
                          "ghz|ghz_phi|z_spins|x_spins|xxz|kcs");
    state_cmd->add_option("--num-qubits", state_args.num_qubits, "qubits for named states");
    state_cmd->add_option("--length", state_args.length, "chain length for xxz/kcs");
    state_cmd->add_option("--coupling", state_args.coupling, "xxz J");
    state_cmd->add_option("--anisotropy", state_args.anisotropy, "xxz Delta");
    state_cmd->add_option("--hopping", state_args.hopping, "kcs t");
    state_cmd->add_option("--field", state_args.field, "kcs h");
    state_cmd->add_option("--chemical-potential", state_args.chemical_potential, "kcs mu");
    state_cmd->add_option("--tol", state_args.tolerance, "ground-state residual tolerance");
    state_cmd->add_option("--max-iter", state_args.max_iterations, "matvec budget");
    state_cmd->add_option("--krylov", state_args.krylov_dim, "Krylov dimension");
    state_cmd->add_option("--seed", state_args.seed, "solver start-vector seed");
    state_cmd->add_option("--out", state_args.out, "output statevector file")->required();

    SampleArgs sample_args;
    CLI::App* sample_cmd = app.add_subcommand("sample", "Emit a snapshot file");
    sample_cmd->add_option("--state", sample_args.state_path, "statevector file")
        ->required();
    sample_cmd->add_option("--config", sample_args.configs, "basis configs, e.g. zzzzz")
        ->required();
    sample_cmd->add_option("--n", sample_args.count, "snapshots per config");
    sample_cmd->add_option("--family", sample_args.family, "rxy|hadamard_k");
    sample_cmd->add_option("--seed", sample_args.seed, "sampling seed");
    sample_cmd->add_option("--out", sample_args.out, "output snapshot file")->required();

    ObservablesArgs observables_args;
    CLI::App* observables_cmd =
        app.add_subcommand("observables", "Evaluate diagnostics on a state");
    observables_cmd->add_option("--state", observables_args.state_path,
                                "statevector file");
    observables_cmd->add_option("--rbm", observables_args.rbm_path, "RBM checkpoint");
    observables_cmd->add_option("--out", observables_args.out_dir, "output directory");

    RunArgs run_args;
    auto add_run_options = [&run_args](CLI::App* cmd, bool with_budget) {
        cmd->add_option("--config", run_args.config_path, "TOML run config")->required();
        cmd->add_option("--out", run_args.out, "override output directory");
        cmd->add_option("--workers", run_args.workers, "parallel seed workers");
        auto* seed = cmd->add_option("--seed", run_args.seed, "run a single seed");
        seed->each([&run_args](const std::string&) { run_args.seed_set = true; });
        if (with_budget) {
            cmd->add_option("--from", run_args.budget_from,
                            "AL run directory to copy the sample budget from");
        }
    };
    CLI::App* al_cmd = app.add_subcommand("al-run", "Active-learning tomography run");
    add_run_options(al_cmd, false);
    CLI::App* baseline_cmd =
        app.add_subcommand("baseline-run", "Budget-matched random-config baseline");
    add_run_options(baseline_cmd, true);
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Paired AL and baseline runs per seed");
    add_run_options(compare_cmd, false);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Sample- or config-count sweep of the baseline");
    add_run_options(sweep_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (state_cmd->parsed()) {
            return cmd_state(state_args);
        }
        if (sample_cmd->parsed()) {
            return cmd_sample(sample_args);
        }
        if (observables_cmd->parsed()) {
            return cmd_observables(observables_args);
        }
        if (al_cmd->parsed()) {
            return cmd_run(run_args, RunMode::Al);
        }
        if (baseline_cmd->parsed()) {
            return cmd_run(run_args, RunMode::Baseline);
        }
        if (compare_cmd->parsed()) {
            return cmd_run(run_args, RunMode::Compare);
        }
        if (sweep_cmd->parsed()) {
            return cmd_run(run_args, RunMode::Sweep);
        }
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
    return 3;
}
