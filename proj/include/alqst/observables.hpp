#ifndef ALQST_OBSERVABLES_HPP
#define ALQST_OBSERVABLES_HPP

#include <optional>

#include "alqst/statevector.hpp"

namespace alqst {

// Summed nearest-neighbor correlator sum_i <S_i^axis S_{i+1}^axis>.
double nn_correlator(const StateVector& state, Axis axis);

// Domain-wall density <(1 - 4 Sx_j Sx_{j+1}) / 2> at bond j (1-based),
// 1 <= j <= L-1.
double domain_wall_density(const StateVector& state, int bond);
Eigen::VectorXd density_vector(const StateVector& state);
double total_density(const StateVector& state);

// Center bond of the string correlator: site L/2 for even L, (L+1)/2 for
// odd L.
int greens_center_site(int length);

// String-ordered two-point function at distance d from the center bond:
// projector density at the center, a product of 2 Sz over the sites in
// between, projector density at the displaced bond. d = 0 recovers the
// center-bond density.
double greens_function(const StateVector& state, int distance);
Eigen::VectorXd greens_vector(const StateVector& state);

// ||v - target|| / ||target|| (Euclidean norms).
double relative_diff(const Eigen::VectorXd& v, const Eigen::VectorXd& target);

// Least-squares decay-law summary for c(d), d >= 1: R^2 of the log-log
// fit (power law) and of the lin-log fit (exponential). Advisory output.
struct DecayFit {
    double r_squared_power = 0.0;
    double r_squared_exponential = 0.0;
    int points_used = 0;
    std::string classification;  // "power_law", "exponential" or "undetermined"
};

DecayFit classify_decay(const Eigen::VectorXd& greens);

struct ObservableReport {
    std::optional<double> rescaled_fidelity;
    std::optional<double> kl;
    double correlator_x = 0.0;
    double correlator_y = 0.0;
    double correlator_z = 0.0;
    Eigen::VectorXd density;
    double n_tot = 0.0;
    Eigen::VectorXd greens;
    double k_fermi = 0.0;  // pi * n_tot
    DecayFit decay;
};

ObservableReport observable_report(const StateVector& state);

} // namespace alqst

#endif
