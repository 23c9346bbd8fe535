#pragma once

// Brute-force truncated Fock-space simulation of the two-ion preparation and
// beam-splitter evolution. Used as ground truth for the covariance and
// closed-form phonon statistics.
//
// Two-mode states are stored on the product basis |n1, n2> with flat index
// n1 * dim + n2 (mode 1 is the slow index).

#include <vector>

#include <Eigen/Dense>

#include "thermoion/gaussian.hpp"
#include "thermoion/phonon_stats.hpp"

namespace thermoion::fock {

inline constexpr int default_single_mode_dim = 60;
inline constexpr int default_joint_dim = 40;

/// Population above which the top 10% of Fock levels signals truncation.
inline constexpr double default_leakage_tol = 1e-8;

class FockState {
public:
    /// Single-mode state from a dim x dim density matrix.
    static FockState single_mode(Eigen::MatrixXcd rho);
    /// Two-mode state from a dim^2 x dim^2 density matrix.
    static FockState two_mode(Eigen::MatrixXcd rho, int dim_per_mode);

    int dim() const { return dim_; }
    int modes() const { return modes_; }
    const Eigen::MatrixXcd& density() const { return rho_; }
    double trace() const { return rho_.trace().real(); }

private:
    FockState(Eigen::MatrixXcd rho, int dim, int modes);

    Eigen::MatrixXcd rho_;
    int dim_;
    int modes_;
};

/// Truncated annihilation operator.
Eigen::MatrixXd annihilation(int dim);

/// Geometric weights (nbar / (1 + nbar))^n, renormalized over the truncation.
FockState thermal_state(double nbar, int dim = default_single_mode_dim);

/// Fock state |n><n|.
FockState number_state(int n, int dim);

FockState tensor_product(const FockState& mode1, const FockState& mode2);

/// S(r) rho S(r)^+ with S(r) = exp[(r/2)(a^2 - a^+2)] exponentiated on the
/// truncated space. Throws TruncationError when the result has more than
/// leakage_tol population in the top 10% of levels.
FockState apply_squeeze(const FockState& state, double r, double leakage_tol = default_leakage_tol);

/// U rho U^+ with U = exp[-i theta (a1 a2^+ + a1^+ a2)] on the truncated
/// two-mode space.
FockState apply_beam_splitter(const FockState& joint, double theta,
                              double leakage_tol = default_leakage_tol);

FockState partial_trace_mode2(const FockState& joint);
FockState partial_trace_mode1(const FockState& joint);

/// Diagonal of a single-mode state; tail_mass is 1 - trace.
PhononDistribution number_distribution(const FockState& state);

/// Largest population in the top 10% of Fock levels of any mode.
double edge_population(const FockState& state);

double mean_occupation(const FockState& single);

/// (n, m) = (<{a, a^+}>/2, -<a^2>) of a single-mode state.
ModeCovarianced mode_covariance(const FockState& single);

/// Full covariance of a two-mode state from its moments.
BipartiteCovarianced bipartite_covariance(const FockState& joint);

/// Squeezed thermal state, doubling the truncation until it is converged.
FockState squeezed_thermal_state(double nbar, double r, int dim = default_single_mode_dim);

/// Product of thermal(nbar1) and squeezed thermal(nbar2, r), mixed by the
/// beam splitter at angle theta; dimension doubled until converged.
FockState evolved_joint_state(double nbar1, double nbar2, double r, double theta,
                              int dim = default_joint_dim);

/// Number distribution of a squeezed thermal state, computed on a truncation
/// large enough that the top-10% population is below tol.
std::vector<double> squeezed_thermal_number_distribution(double nbar, double r, double tol = 1e-14);

/// Phonon-number distribution P(0..k_report) of ion 1 after the evolution,
/// for the thermal(nbar1) x squeezed-thermal(nbar2, r) input.
///
/// Number conservation of the coupling makes the mode-1 marginal depend only
/// on the input number distributions, so this evaluates
///   P(k) = sum_{n1, n2} p1(n1) p2(n2) |<k, n1 + n2 - k| U |n1, n2>|^2
/// with U|n1, n2> built by repeated application of
/// U a1^+ U^+ = c a1^+ - i s a2^+ and U a2^+ U^+ = c a2^+ - i s a1^+.
/// Avoids the dim^2 joint space, so truncations of several hundred levels
/// per mode are practical.
PhononDistribution probe_number_distribution(double nbar1, double nbar2, double r, double theta,
                                             int k_report, double tol = 1e-14);

} // namespace thermoion::fock
