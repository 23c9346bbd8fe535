#pragma once

// Temperature estimation from phonon-number measurements on ion 1: Planck
// occupations, the classical Fisher matrix over (T1, T2) and Cramer-Rao bounds.

#include <span>
#include <vector>

#include "thermoion/phonon_stats.hpp"

namespace thermoion {

enum class OmegaConvention {
    angular,   ///< omega is given in rad/s
    ordinary,  ///< omega is given in Hz and multiplied by 2 pi
};

struct TrapConfig {
    double omega{4e6};
    double t1{2.8e-5};
    double t2{2.08e-5};
    double r{0};
    double theta{0};
    int k_max{default_k_max};
    OmegaConvention convention{OmegaConvention::angular};

    /// Trap frequency in rad/s.
    double angular_frequency() const;
    /// Throws DomainError naming the offending field.
    void validate() const;
};

struct FisherMatrix {
    double f11{0};
    double f22{0};
    double f12{0};

    double determinant() const { return f11 * f22 - f12 * f12; }
};

/// 1 / (exp(hbar omega / k_B t) - 1), omega in rad/s.
double occupation_from_temperature(double t, double omega);

/// d nbar / dT.
double occupation_temperature_derivative(double t, double omega);

ProbeCoefficients probe_coefficients(const TrapConfig& cfg);

struct LikelihoodGradient {
    std::vector<double> probs;  ///< P1(0..k_max)
    std::vector<double> d_t1;   ///< d ln P1(k) / dT1
    std::vector<double> d_t2;   ///< d ln P1(k) / dT2
    double tail_mass{0};
};

/// Analytic score of every outcome, through dP/d(a, b) (automatic
/// differentiation of the recurrence) and the occupation chain rule. Entries
/// with P1(k) = 0 have zero score.
LikelihoodGradient log_likelihood_gradient(const TrapConfig& cfg);

/// Probabilities below this are left out of the Fisher sums.
inline constexpr double fisher_probability_floor = 1e-30;
/// Largest tail mass beyond k_max accepted by fisher_matrix.
inline constexpr double fisher_tail_tolerance = 1e-6;

/// F_ab = sum_k P1(k) (d ln P1/dT_a)(d ln P1/dT_b), k <= cfg.k_max. Throws
/// TruncationError when the distribution has more than 1e-6 beyond k_max.
FisherMatrix fisher_matrix(const TrapConfig& cfg);

struct CramerRaoBounds {
    double t1_printed{0};   ///< 1 / sqrt(F11)
    double t2_printed{0};   ///< 1 / sqrt(F22)
    double t1_standard{0};  ///< 1 / F11
    double t2_standard{0};  ///< 1 / F22
};

/// Element-wise bounds; a zero Fisher element gives an infinite bound.
CramerRaoBounds cramer_rao(const FisherMatrix& f);

enum class SweepAxis { theta, t2 };

/// One Fisher matrix per grid value, with `axis` of the template replaced.
std::vector<FisherMatrix> fisher_sweep(const TrapConfig& tmpl, SweepAxis axis,
                                       std::span<const double> grid);

} // namespace thermoion
