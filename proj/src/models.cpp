#include "alqst/models.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace alqst {

NamedState named_state_from_string(const std::string& name) {
    if (name == "ghz") return NamedState::Ghz;
    if (name == "ghz_phi") return NamedState::GhzPhi;
    if (name == "z_spins") return NamedState::ZSpins;
    if (name == "x_spins") return NamedState::XSpins;
    throw std::invalid_argument("unknown named state '" + name + "'");
}

std::string to_string(NamedState kind) {
    switch (kind) {
    case NamedState::Ghz: return "ghz";
    case NamedState::GhzPhi: return "ghz_phi";
    case NamedState::ZSpins: return "z_spins";
    default: return "x_spins";
    }
}

StateVector named_state(NamedState kind, int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("qubit count must be in [1, 20]");
    }
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (kind) {
    case NamedState::Ghz:
        amps[0] = inv_sqrt2;
        amps[dim - 1] = inv_sqrt2;
        break;
    case NamedState::GhzPhi:
        amps[0] = inv_sqrt2;
        amps[dim - 1] = std::complex<double>(0.0, inv_sqrt2);
        break;
    case NamedState::ZSpins:
        amps[dim - 1] = 1.0;
        break;
    case NamedState::XSpins:
        amps.setConstant(std::pow(2.0, -0.5 * num_qubits));
        break;
    }
    return StateVector(num_qubits, std::move(amps));
}

void validate(const XxzSpec& spec) {
    if (spec.length < 2) {
        throw std::invalid_argument("XXZ chain needs at least 2 sites");
    }
    if (spec.length > kMaxQubits) {
        throw std::invalid_argument("dense representation caps the chain at 20 sites");
    }
}

void validate(const KcsSpec& spec) {
    if (spec.length < 3) {
        throw std::invalid_argument("KCS chain needs at least 3 sites");
    }
    if (spec.length > kMaxQubits) {
        throw std::invalid_argument("dense representation caps the chain at 20 sites");
    }
}

namespace {

// Bit of 1-based site `site` in index x; bit 0 corresponds to Sz = +1/2.
inline int site_bit(std::uint64_t x, int site, int length) {
    return static_cast<int>((x >> (length - site)) & 1u);
}

inline std::uint64_t site_mask(int site, int length) {
    return std::uint64_t{1} << (length - site);
}

template <typename Vector>
void apply_xxz_impl(const XxzSpec& spec, const Vector& v, Vector& out) {
    validate(spec);
    const int length = spec.length;
    const Eigen::Index dim = Eigen::Index{1} << length;
    if (v.size() != dim) {
        throw std::invalid_argument("vector length must be 2^L");
    }
    out.setZero(dim);
    const double j = spec.coupling;
    const double jz = spec.coupling * (1.0 + spec.anisotropy);
    for (int site = 1; site < length; ++site) {
        const std::uint64_t mask = site_mask(site, length) | site_mask(site + 1, length);
        for (Eigen::Index x = 0; x < dim; ++x) {
            const bool aligned = site_bit(x, site, length) == site_bit(x, site + 1, length);
            out[x] += (aligned ? 0.25 : -0.25) * jz * v[x];
            if (!aligned) {
                // (Sx Sx + Sy Sy) swaps 01 <-> 10 with element 1/2
                out[x] += 0.5 * j * v[x ^ mask];
            }
        }
    }
}

template <typename Vector>
void apply_kcs_impl(const KcsSpec& spec, const Vector& v, Vector& out) {
    validate(spec);
    const int length = spec.length;
    const Eigen::Index dim = Eigen::Index{1} << length;
    if (v.size() != dim) {
        throw std::invalid_argument("vector length must be 2^L");
    }
    out.setZero(dim);
    const double t = spec.hopping;
    const double h = spec.field;
    const double mu = spec.chemical_potential;
    // kinetic term, j = 2..L-1: t (4 Sx_{j-1} Sx_{j+1} - 1) Sz_j
    for (int j = 2; j <= length - 1; ++j) {
        const std::uint64_t flip = site_mask(j - 1, length) | site_mask(j + 1, length);
        for (Eigen::Index x = 0; x < dim; ++x) {
            const double sz = site_bit(x, j, length) ? -0.5 : 0.5;
            out[x ^ flip] += t * sz * v[x];
            out[x] -= t * sz * v[x];
        }
    }
    // field term, j = 1..L: -h 2 Sx_j
    if (h != 0.0) {
        for (int j = 1; j <= length; ++j) {
            const std::uint64_t flip = site_mask(j, length);
            for (Eigen::Index x = 0; x < dim; ++x) {
                out[x ^ flip] -= h * v[x];
            }
        }
    }
    // Ising term, j = 2..L: mu Sx_{j-1} Sx_j
    if (mu != 0.0) {
        for (int j = 2; j <= length; ++j) {
            const std::uint64_t flip = site_mask(j - 1, length) | site_mask(j, length);
            for (Eigen::Index x = 0; x < dim; ++x) {
                out[x ^ flip] += 0.25 * mu * v[x];
            }
        }
    }
}

} // namespace

void apply_xxz(const XxzSpec& spec, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    apply_xxz_impl(spec, v, out);
}

void apply_kcs(const KcsSpec& spec, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    apply_kcs_impl(spec, v, out);
}

StateVector apply_hamiltonian(const XxzSpec& spec, const StateVector& v) {
    Eigen::VectorXcd out;
    apply_xxz_impl(spec, v.amplitudes, out);
    StateVector result;
    result.num_qubits = v.num_qubits;
    result.amplitudes = std::move(out);
    return result;
}

StateVector apply_hamiltonian(const KcsSpec& spec, const StateVector& v) {
    Eigen::VectorXcd out;
    apply_kcs_impl(spec, v.amplitudes, out);
    StateVector result;
    result.num_qubits = v.num_qubits;
    result.amplitudes = std::move(out);
    return result;
}

namespace {

// Thick-restart Krylov iteration for the lowest eigenpair of a real
// symmetric operator. The basis is kept fully orthonormal, the projected
// matrix is diagonalized each cycle, and the lowest Ritz vectors are
// carried across restarts.
template <typename ApplyFn>
GroundStateResult lowest_eigenpair(int length, ApplyFn&& apply,
                                   const GroundStateOptions& opts, Rng& rng) {
    const Eigen::Index dim = Eigen::Index{1} << length;
    const int krylov = std::min<int>(opts.krylov_dim, static_cast<int>(dim));
    const int keep = std::max(1, std::min(krylov / 4, 6));

    std::vector<Eigen::VectorXd> basis;
    basis.reserve(krylov);
    Eigen::VectorXd start(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        start[i] = uniform_unit(rng) - 0.5;
    }
    start.normalize();
    basis.push_back(start);

    Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(krylov, krylov);
    Eigen::VectorXd applied(dim);
    Eigen::VectorXd ritz(dim);
    Eigen::VectorXd residual_vec(dim);
    int matvecs = 0;
    double best_residual = std::numeric_limits<double>::max();

    auto orthogonalize = [&](Eigen::VectorXd& w) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                w -= q.dot(w) * q;
            }
        }
        return w.norm();
    };

    while (matvecs < opts.max_iterations) {
        // expand the basis to full Krylov dimension
        while (static_cast<int>(basis.size()) < krylov && matvecs < opts.max_iterations) {
            const int j = static_cast<int>(basis.size()) - 1;
            apply(basis[j], applied);
            ++matvecs;
            for (int i = 0; i <= j; ++i) {
                const double h = basis[i].dot(applied);
                projected(i, j) = h;
                projected(j, i) = h;
            }
            Eigen::VectorXd w = applied;
            const double norm = orthogonalize(w);
            if (norm < 1e-14) {
                break;  // invariant subspace found
            }
            basis.push_back(w / norm);
        }
        const int m = static_cast<int>(basis.size());
        // close the projection with the last column
        apply(basis[m - 1], applied);
        ++matvecs;
        for (int i = 0; i < m; ++i) {
            const double h = basis[i].dot(applied);
            projected(i, m - 1) = h;
            projected(m - 1, i) = h;
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
            projected.topLeftCorner(m, m));
        const Eigen::MatrixXd& vectors = solver.eigenvectors();

        ritz.setZero();
        for (int i = 0; i < m; ++i) {
            ritz += vectors(i, 0) * basis[i];
        }
        ritz.normalize();
        apply(ritz, residual_vec);
        ++matvecs;
        const double energy = ritz.dot(residual_vec);
        residual_vec -= energy * ritz;
        const double residual = residual_vec.norm();
        best_residual = std::min(best_residual, residual);

        if (residual <= opts.tolerance) {
            GroundStateResult result;
            result.energy = energy;
            result.residual_norm = residual;
            result.matvec_count = matvecs;
            result.state.num_qubits = length;
            result.state.amplitudes = ritz.cast<std::complex<double>>();
            return result;
        }

        // restart from the lowest Ritz vectors plus the residual direction
        const int retained = std::min(keep, m);
        std::vector<Eigen::VectorXd> next;
        next.reserve(krylov);
        for (int r = 0; r < retained; ++r) {
            Eigen::VectorXd q = Eigen::VectorXd::Zero(dim);
            for (int i = 0; i < m; ++i) {
                q += vectors(i, r) * basis[i];
            }
            next.push_back(std::move(q));
        }
        basis = std::move(next);
        Eigen::VectorXd w = residual_vec;
        const double norm = orthogonalize(w);
        if (norm > 1e-14) {
            basis.push_back(w / norm);
        }
        // rebuild the projection of the retained block
        projected.setZero();
        for (int jcol = 0; jcol < static_cast<int>(basis.size()); ++jcol) {
            apply(basis[jcol], applied);
            ++matvecs;
            for (int i = 0; i <= jcol; ++i) {
                const double h = basis[i].dot(applied);
                projected(i, jcol) = h;
                projected(jcol, i) = h;
            }
        }
    }
    throw ConvergenceError("ground-state iteration did not reach tolerance " +
                               std::to_string(opts.tolerance) + "; best residual " +
                               std::to_string(best_residual),
                           best_residual);
}

} // namespace

GroundStateResult ground_state(const XxzSpec& spec, const GroundStateOptions& opts, Rng& rng) {
    validate(spec);
    return lowest_eigenpair(
        spec.length,
        [&spec](const Eigen::VectorXd& v, Eigen::VectorXd& out) { apply_xxz(spec, v, out); },
        opts, rng);
}

namespace {

// At h = 0 every KCS level is exactly twofold degenerate: the product of
// all Pauli-z operators commutes with the Hamiltonian and exchanges the
// two conserved boundary x-spin sectors. The iterative solver then lands
// on an arbitrary superposition of the pair, whose computational-basis
// statistics carry interference that differs from run to run. Resolving
// the pair onto a definite boundary x-polarization gives a deterministic
// representative with the same energy and observables.
void resolve_boundary_doublet(const KcsSpec& spec, GroundStateResult& result) {
    const int n = spec.length;
    const Eigen::Index dim = result.state.dim();
    const std::uint64_t first_site = std::uint64_t{1} << (n - 1);
    Eigen::VectorXcd best;
    double best_norm = -1.0;
    for (double sign : {1.0, -1.0}) {
        // (1/2 + sign * Sx_1) projects onto the sign * x boundary sector
        Eigen::VectorXcd projected(dim);
        for (Eigen::Index x = 0; x < dim; ++x) {
            projected[x] = 0.5 * (result.state.amplitudes[x] +
                                  sign * result.state.amplitudes[x ^ first_site]);
        }
        const double norm = projected.norm();
        if (norm > best_norm) {
            best_norm = norm;
            best = std::move(projected);
        }
    }
    if (best_norm < 1e-8) {
        return;
    }
    best /= best_norm;
    Eigen::VectorXcd applied;
    apply_kcs_impl(spec, best, applied);
    const double energy = best.dot(applied).real();
    const double residual = (applied - energy * best).norm();
    if (residual <= std::max(result.residual_norm, 1e-10) * 10.0 + 1e-12) {
        result.state.amplitudes = std::move(best);
        result.energy = energy;
        result.residual_norm = residual;
    }
}

} // namespace

GroundStateResult ground_state(const KcsSpec& spec, const GroundStateOptions& opts, Rng& rng) {
    validate(spec);
    GroundStateResult result = lowest_eigenpair(
        spec.length,
        [&spec](const Eigen::VectorXd& v, Eigen::VectorXd& out) { apply_kcs(spec, v, out); },
        opts, rng);
    if (spec.field == 0.0) {
        resolve_boundary_doublet(spec, result);
    }
    return result;
}

} // namespace alqst
