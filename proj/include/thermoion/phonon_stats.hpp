#pragma once

// Phonon-number distribution of the probe mode (ion 1) after the beam-splitter
// evolution.
//
// The probe is a zero-mean Gaussian mode with V' - I/2 = [[a, b], [b, a]]. With
// D = a^2 - b^2, alpha = D + a and Q = (1 + a)^2 - b^2 the distribution is
//
//   P(k) = 2F1((1+k)/2, (2+k)/2; 1; (B/A)^2) / (A^{k+1} sqrt(D)),
//   A = 1 + a/D = alpha/D,   B = b/D,
//
// which requires D > 0 (a Gaussian P-function). Equivalently, for every state,
//
//   P(k) = H_k(alpha, alpha^2 - b^2) / Q^{k + 1/2},
//
// where H_k(u, w) = w^{k/2} P_k(u / sqrt(w)) is the homogeneous Legendre
// polynomial, generated by (n+1) H_{n+1} = (2n+1) u H_n - n w H_{n-1}. The
// second form covers non-classical probes (a < b) where the series diverges.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "thermoion/gaussian.hpp"

namespace thermoion {

struct ProbeCoefficients {
    double a{0};  ///< n' - 1/2 of the probe mode
    double b{0};  ///< |m'| of the probe mode

    double determinant() const { return a * a - b * b; }
    double alpha() const { return a * a + a - b * b; }
    double vacuum_overlap_det() const { return (1 + a) * (1 + a) - b * b; }

    /// Gaussian-integral coefficients A = 1 + a/D and B = b/D; only defined
    /// when D = a^2 - b^2 > 0.
    std::optional<double> gaussian_a() const;
    std::optional<double> gaussian_b() const;
    /// (B/A)^2 = b^2 / alpha^2; < 1 iff D > 0.
    double series_argument() const;
};

/// a = nbar1 cos^2(theta) + sin^2(theta) [(nbar2 + 1/2) cosh 2r - 1/2],
/// b = (nbar2 + 1/2) sinh(2|r|) sin^2(theta).
ProbeCoefficients probe_coefficients(double nbar1, double nbar2, double r, double theta);

/// a = n - 1/2, b = |m| of an arbitrary single-mode covariance.
ProbeCoefficients probe_coefficients(const ModeCovarianced& probe);

/// 2F1((1+k)/2, (2+k)/2; 1; z) by direct power series, summed in extended
/// precision with compensation until the geometric tail bound drops below
/// rel_tol of the partial sum. Throws InconsistencyError for z >= 1.
long double hypergeometric_probe_series(int k, long double z, long double rel_tol = 1e-14L);

/// P(k), via the hypergeometric series where it converges quickly and the
/// Legendre continuation otherwise.
double prob_closed_form(const ProbeCoefficients& coef, int k);

/// P(k) strictly through the hypergeometric series; requires (B/A)^2 < 1.
double prob_hypergeometric(const ProbeCoefficients& coef, int k);

/// Fills out[k] = P(k) for k < out.size() by the normalized Legendre
/// recurrence p_k = H_k / Q^{k+1/2}. Generic in Scalar so the same code can be
/// run on automatic-differentiation scalars.
template <typename Scalar>
void probe_probabilities(const Scalar& a, const Scalar& b, std::span<Scalar> out)
{
    using std::sqrt;
    if (out.empty())
        return;
    const Scalar b2 = b * b;
    const Scalar q = (a + 1.0) * (a + 1.0) - b2;
    const Scalar alpha = a * a + a - b2;
    const Scalar u = alpha / q;
    const Scalar v = (alpha * alpha - b2) / (q * q);
    out[0] = 1.0 / sqrt(q);
    if (out.size() == 1)
        return;
    out[1] = u * out[0];
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        out[n + 1] = ((2.0 * nd + 1.0) * u * out[n] - nd * v * out[n - 1]) / (nd + 1.0);
    }
}

struct PhononDistribution {
    std::vector<double> probs;  ///< P(0..k_max)
    int k_max{0};
    double tail_mass{0};        ///< sum of P(k) for k > k_max

    double total() const;
    double mean() const;
};

inline constexpr int default_k_max = 200;

/// Truncated distribution P(0..k_max). tail_mass is obtained by continuing the
/// recurrence beyond k_max, not as 1 - sum.
PhononDistribution distribution(const ProbeCoefficients& coef, int k_max = default_k_max);

/// Doubles k_max (starting from `k_start`) until tail_mass < tail_tol.
PhononDistribution distribution_adaptive(const ProbeCoefficients& coef, double tail_tol = 1e-10,
                                         int k_start = default_k_max);

/// iid inverse-CDF draws; deterministic for a given seed. The distribution
/// must be normalized to within 1e-6 (probs + tail).
std::vector<int> sample(const PhononDistribution& dist, std::size_t count, std::uint64_t seed);

} // namespace thermoion
