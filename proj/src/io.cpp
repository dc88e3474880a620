#include "alqst/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace alqst {

namespace {

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

} // namespace

SnapshotPool read_snapshots(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    const std::string file = path.string();
    std::string line;
    int line_number = 1;
    if (!std::getline(in, line)) {
        throw ParseError(file, 1, "missing header line");
    }
    int num_qubits = 0;
    {
        std::istringstream header(line);
        std::string tag;
        if (!(header >> tag >> num_qubits) || tag != "N" || num_qubits < 1 ||
            num_qubits > kMaxQubits) {
            throw ParseError(file, 1, "expected header 'N <num_qubits>' with 1 <= N <= 20");
        }
        std::string extra;
        if (header >> extra) {
            throw ParseError(file, 1, "trailing content after header");
        }
    }
    SnapshotPool pool;
    pool.num_qubits = num_qubits;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        const std::size_t space = line.find(' ');
        if (space == std::string::npos ||
            line.find(' ', space + 1) != std::string::npos) {
            throw ParseError(file, line_number,
                             "expected '<config> <outcome>' with a single space");
        }
        const std::string config_text = line.substr(0, space);
        const std::string outcome_text = line.substr(space + 1);
        if (static_cast<int>(config_text.size()) != num_qubits ||
            static_cast<int>(outcome_text.size()) != num_qubits) {
            throw ParseError(file, line_number, "config and outcome must have length N");
        }
        try {
            pool.add(Snapshot{BasisConfig(config_text), outcome_from_string(outcome_text)});
        } catch (const std::invalid_argument& error) {
            throw ParseError(file, line_number, error.what());
        }
    }
    return pool;
}

void write_snapshots(const std::filesystem::path& path, const SnapshotPool& pool) {
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    out << "N " << pool.num_qubits << "\n";
    for (const auto& snapshot : pool.snapshots) {
        out << snapshot.config.str() << ' '
            << outcome_to_string(snapshot.outcome, pool.num_qubits) << "\n";
    }
}

namespace {

void write_u64_le(std::ostream& out, std::uint64_t value) {
    std::array<unsigned char, 8> bytes;
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xffu);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

std::uint64_t read_u64_le(std::istream& in) {
    std::array<unsigned char, 8> bytes;
    in.read(reinterpret_cast<char*>(bytes.data()), 8);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return value;
}

void write_f64_le(std::ostream& out, double value) {
    std::uint64_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    write_u64_le(out, bits);
}

double read_f64_le(std::istream& in) {
    const std::uint64_t bits = read_u64_le(in);
    double value;
    std::memcpy(&value, &bits, sizeof(value));
    return value;
}

} // namespace

StateVector read_statevector(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
    const std::uint64_t num_qubits = read_u64_le(in);
    if (!in || num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::runtime_error(path.string() + ": invalid qubit count header");
    }
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::VectorXcd amps(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = read_f64_le(in);
        const double im = read_f64_le(in);
        amps[i] = std::complex<double>(re, im);
    }
    if (!in) {
        throw std::runtime_error(path.string() + ": truncated amplitude data");
    }
    return StateVector(static_cast<int>(num_qubits), std::move(amps));
}

void write_statevector(const std::filesystem::path& path, const StateVector& state) {
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    write_u64_le(out, static_cast<std::uint64_t>(state.num_qubits));
    for (Eigen::Index i = 0; i < state.dim(); ++i) {
        write_f64_le(out, state.amplitudes[i].real());
        write_f64_le(out, state.amplitudes[i].imag());
    }
}

namespace {

nlohmann::json params_to_json(const RbmParams& params) {
    std::vector<double> weights(params.weights.size());
    for (int i = 0; i < params.num_hidden(); ++i) {
        for (int j = 0; j < params.num_visible(); ++j) {
            weights[static_cast<std::size_t>(i) * params.num_visible() + j] =
                params.weights(i, j);
        }
    }
    return nlohmann::json{
        {"num_visible", params.num_visible()},
        {"num_hidden", params.num_hidden()},
        {"weights", weights},
        {"visible_bias", std::vector<double>(params.visible_bias.data(),
                                             params.visible_bias.data() +
                                                 params.visible_bias.size())},
        {"hidden_bias", std::vector<double>(params.hidden_bias.data(),
                                            params.hidden_bias.data() +
                                                params.hidden_bias.size())},
    };
}

RbmParams params_from_json(const nlohmann::json& json) {
    const int num_visible = json.at("num_visible").get<int>();
    const int num_hidden = json.at("num_hidden").get<int>();
    RbmParams params = RbmParams::zeros(num_visible, num_hidden);
    const auto weights = json.at("weights").get<std::vector<double>>();
    if (static_cast<int>(weights.size()) != num_visible * num_hidden) {
        throw std::runtime_error("weight array does not match the stated shape");
    }
    for (int i = 0; i < num_hidden; ++i) {
        for (int j = 0; j < num_visible; ++j) {
            params.weights(i, j) = weights[static_cast<std::size_t>(i) * num_visible + j];
        }
    }
    const auto visible = json.at("visible_bias").get<std::vector<double>>();
    const auto hidden = json.at("hidden_bias").get<std::vector<double>>();
    if (static_cast<int>(visible.size()) != num_visible ||
        static_cast<int>(hidden.size()) != num_hidden) {
        throw std::runtime_error("bias arrays do not match the stated shape");
    }
    params.visible_bias = Eigen::Map<const Eigen::VectorXd>(visible.data(), num_visible);
    params.hidden_bias = Eigen::Map<const Eigen::VectorXd>(hidden.data(), num_hidden);
    return params;
}

} // namespace

RbmCheckpoint read_rbm_checkpoint(const std::filesystem::path& path) {
    std::ifstream in = open_input(path, std::ios::in);
    nlohmann::json json;
    in >> json;
    RbmCheckpoint checkpoint;
    checkpoint.wavefunction.amplitude = params_from_json(json.at("amplitude"));
    checkpoint.wavefunction.phase = params_from_json(json.at("phase"));
    checkpoint.reference = BasisConfig(json.at("reference").get<std::string>());
    checkpoint.family = gate_family_from_string(json.at("gate_family").get<std::string>());
    checkpoint.seed = json.at("seed").get<std::uint64_t>();
    checkpoint.epoch = json.at("epoch").get<int>();
    return checkpoint;
}

void write_rbm_checkpoint(const std::filesystem::path& path, const RbmCheckpoint& checkpoint) {
    nlohmann::json json{
        {"amplitude", params_to_json(checkpoint.wavefunction.amplitude)},
        {"phase", params_to_json(checkpoint.wavefunction.phase)},
        {"reference", checkpoint.reference.str()},
        {"gate_family", to_string(checkpoint.family)},
        {"seed", checkpoint.seed},
        {"epoch", checkpoint.epoch},
    };
    std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
    out << json.dump(2) << "\n";
}

} // namespace alqst
