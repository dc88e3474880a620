#include "alqst/observables.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace alqst {

namespace {

inline std::uint64_t site_mask(int site, int length) {
    return std::uint64_t{1} << (length - site);
}

// <psi| Sa_i Sa_{i+1} |psi> for one bond (1-based site i).
std::complex<double> bond_correlator(const StateVector& state, Axis axis, int site) {
    const int length = state.num_qubits;
    const Eigen::Index dim = state.dim();
    const std::uint64_t mask_i = site_mask(site, length);
    const std::uint64_t mask_j = site_mask(site + 1, length);
    std::complex<double> value = 0.0;
    switch (axis) {
    case Axis::Z:
        for (Eigen::Index x = 0; x < dim; ++x) {
            const bool aligned = ((x & mask_i) != 0) == ((x & mask_j) != 0);
            value += (aligned ? 0.25 : -0.25) * std::norm(state.amplitudes[x]);
        }
        break;
    case Axis::X:
        for (Eigen::Index x = 0; x < dim; ++x) {
            value += 0.25 * std::conj(state.amplitudes[x]) *
                     state.amplitudes[x ^ (mask_i | mask_j)];
        }
        break;
    case Axis::Y:
        // Sy|0> = (i/2)|1>, Sy|1> = (-i/2)|0>; the pair contributes
        // -1/4 when the two bits agree and +1/4 when they differ.
        for (Eigen::Index x = 0; x < dim; ++x) {
            const bool aligned = ((x & mask_i) != 0) == ((x & mask_j) != 0);
            value += (aligned ? -0.25 : 0.25) * std::conj(state.amplitudes[x]) *
                     state.amplitudes[x ^ (mask_i | mask_j)];
        }
        break;
    }
    return value;
}

// |out> = (1 - 4 Sx_j Sx_{j+1}) / 2 |in>
Eigen::VectorXcd apply_wall_projector(const Eigen::VectorXcd& in, int bond, int length) {
    const std::uint64_t mask = site_mask(bond, length) | site_mask(bond + 1, length);
    Eigen::VectorXcd out(in.size());
    for (Eigen::Index x = 0; x < in.size(); ++x) {
        out[x] = 0.5 * (in[x] - in[x ^ mask]);
    }
    return out;
}

} // namespace

double nn_correlator(const StateVector& state, Axis axis) {
    if (state.num_qubits < 2) {
        throw std::invalid_argument("correlator needs at least 2 sites");
    }
    std::complex<double> value = 0.0;
    for (int site = 1; site < state.num_qubits; ++site) {
        value += bond_correlator(state, axis, site);
    }
    return value.real();
}

double domain_wall_density(const StateVector& state, int bond) {
    const int length = state.num_qubits;
    if (bond < 1 || bond > length - 1) {
        throw std::invalid_argument("bond index out of range");
    }
    const std::complex<double> xx = bond_correlator(state, Axis::X, bond);
    return 0.5 * (1.0 - 4.0 * xx.real());
}

Eigen::VectorXd density_vector(const StateVector& state) {
    Eigen::VectorXd density(state.num_qubits - 1);
    for (int bond = 1; bond < state.num_qubits; ++bond) {
        density[bond - 1] = domain_wall_density(state, bond);
    }
    return density;
}

double total_density(const StateVector& state) {
    return density_vector(state).mean();
}

int greens_center_site(int length) {
    return length % 2 == 0 ? length / 2 : (length + 1) / 2;
}

double greens_function(const StateVector& state, int distance) {
    const int length = state.num_qubits;
    const int max_distance = length / 2 - 1;
    if (distance < 0 || distance > max_distance) {
        throw std::invalid_argument("greens distance out of range");
    }
    const int center = greens_center_site(length);
    // rightmost factor first: projector at the displaced bond
    Eigen::VectorXcd work = apply_wall_projector(state.amplitudes, center + distance, length);
    // string of 2 Sz over sites center+1 .. center+distance (diagonal)
    std::uint64_t string_mask = 0;
    for (int site = center + 1; site <= center + distance; ++site) {
        string_mask |= site_mask(site, length);
    }
    if (string_mask != 0) {
        for (Eigen::Index x = 0; x < work.size(); ++x) {
            if (std::popcount(static_cast<std::uint64_t>(x) & string_mask) & 1) {
                work[x] = -work[x];
            }
        }
    }
    work = apply_wall_projector(work, center, length);
    return state.amplitudes.dot(work).real();
}

Eigen::VectorXd greens_vector(const StateVector& state) {
    const int entries = state.num_qubits / 2;
    Eigen::VectorXd greens(entries);
    for (int d = 0; d < entries; ++d) {
        greens[d] = greens_function(state, d);
    }
    return greens;
}

double relative_diff(const Eigen::VectorXd& v, const Eigen::VectorXd& target) {
    if (v.size() != target.size()) {
        throw std::invalid_argument("relative_diff requires equal lengths");
    }
    const double target_norm = target.norm();
    if (target_norm == 0.0) {
        throw std::invalid_argument("relative_diff target has zero norm");
    }
    return (v - target).norm() / target_norm;
}

namespace {

// R^2 of the ordinary least-squares line through (x, y).
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return (sxy * sxy) / (sxx * syy);
}

} // namespace

DecayFit classify_decay(const Eigen::VectorXd& greens) {
    DecayFit fit;
    std::vector<double> log_d, d_lin, log_c;
    for (Eigen::Index d = 1; d < greens.size(); ++d) {
        if (greens[d] > 0.0) {
            log_d.push_back(std::log(static_cast<double>(d)));
            d_lin.push_back(static_cast<double>(d));
            log_c.push_back(std::log(greens[d]));
        }
    }
    fit.points_used = static_cast<int>(log_c.size());
    if (fit.points_used < 3) {
        fit.classification = "undetermined";
        return fit;
    }
    fit.r_squared_power = r_squared(log_d, log_c);
    fit.r_squared_exponential = r_squared(d_lin, log_c);
    fit.classification = fit.r_squared_power > fit.r_squared_exponential
                             ? "power_law"
                             : "exponential";
    return fit;
}

ObservableReport observable_report(const StateVector& state) {
    ObservableReport report;
    report.correlator_x = nn_correlator(state, Axis::X);
    report.correlator_y = nn_correlator(state, Axis::Y);
    report.correlator_z = nn_correlator(state, Axis::Z);
    report.density = density_vector(state);
    report.n_tot = report.density.mean();
    report.greens = greens_vector(state);
    report.k_fermi = std::numbers::pi * report.n_tot;
    report.decay = classify_decay(report.greens);
    return report;
}

} // namespace alqst
