#ifndef ALQST_IO_HPP
#define ALQST_IO_HPP

#include <filesystem>
#include <string>

#include "alqst/committee.hpp"
#include "alqst/rbm.hpp"
#include "alqst/statevector.hpp"

namespace alqst {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& message)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Snapshot text format: first line "N <num_qubits>", then one
// "<config> <outcome>" pair per line, LF endings.
SnapshotPool read_snapshots(const std::filesystem::path& path);
void write_snapshots(const std::filesystem::path& path, const SnapshotPool& pool);

// StateVector binary format: 8-byte little-endian qubit count, then 2^N
// interleaved little-endian float64 (re, im) pairs.
StateVector read_statevector(const std::filesystem::path& path);
void write_statevector(const std::filesystem::path& path, const StateVector& state);

// RBM checkpoint: JSON with shapes, row-major flattened weights, biases,
// training frame and bookkeeping.
struct RbmCheckpoint {
    ComplexRbmWavefunction wavefunction;
    BasisConfig reference;
    GateFamily family = GateFamily::RotXY;
    std::uint64_t seed = 0;
    int epoch = 0;
};

RbmCheckpoint read_rbm_checkpoint(const std::filesystem::path& path);
void write_rbm_checkpoint(const std::filesystem::path& path, const RbmCheckpoint& checkpoint);

} // namespace alqst

#endif
