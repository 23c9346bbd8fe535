#pragma once

// Physicality (V + E/2 >= 0) and separability (TVT + E/2 >= 0) of bipartite
// Gaussian covariances, both as closed-form scalar bounds on n2 and as 4x4
// eigenvalue tests.
//
// The scalar bounds are the Schur complement of the V1 + Z/2 block:
//
//   n1 >= sqrt(|m1|^2 + 1/4)
//   n2 >= s/d + sqrt( 1/4 [ (|m_c|^2 - |m_s|^2) / d - 1 ]^2 + |m2 - c/d|^2 )   physical
//   n2 >= s/d + sqrt( 1/4 [ ||m_c|^2 - |m_s|^2| / d + 1 ]^2 + |m2 - c/d|^2 )   separable
//
// The separability line is exact on physical states and never weaker than the
// physicality line, so separable => physical holds pointwise.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermoion/errors.hpp"
#include "thermoion/gaussian.hpp"

namespace thermoion {

template <typename Scalar>
struct ScdScalars {
    Scalar s{0};
    std::complex<Scalar> c{0};
    Scalar d{0};
};

/// |d| below this is treated as a pure mode 1.
inline constexpr double singular_d_threshold = 1e-12;

template <typename Scalar>
ScdScalars<Scalar> scd(const BipartiteCovariance<Scalar>& v)
{
    const Scalar n1 = v.v1.n;
    const auto m1 = v.v1.m;
    const auto ms = v.c.m_s;
    const auto mc = v.c.m_c;

    ScdScalars<Scalar> out;
    out.d = n1 * n1 - Scalar(0.25) - std::norm(m1);
    if (std::abs(out.d) < Scalar(singular_d_threshold))
        throw SingularConfigurationError("scd: d = n1^2 - 1/4 - |m1|^2 vanishes (mode 1 is pure)");
    out.s = n1 * (std::norm(mc) + std::norm(ms)) -
            std::real(mc * ms * std::conj(m1) + std::conj(mc) * std::conj(ms) * m1);
    out.c = Scalar(2) * n1 * std::conj(ms) * mc - mc * mc * std::conj(m1) -
            std::conj(ms) * std::conj(ms) * m1;
    return out;
}

/// Smallest eigenvalue of T V T + E/2; negative iff the state is entangled.
template <typename Scalar>
Scalar separability_eigenvalue(const BipartiteCovariance<Scalar>& v)
{
    const Matrix4c<Scalar> t = partial_reflection<Scalar>();
    const Matrix4c<Scalar> h = t * assemble(v) * t + symplectic_form<Scalar>() / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

namespace detail {

template <typename Scalar>
Scalar second_line_margin(const BipartiteCovariance<Scalar>& v, const ScdScalars<Scalar>& k,
                          Scalar sign)
{
    using std::abs;
    using std::sqrt;
    // The physicality line needs the signed imbalance: |.| there accepts
    // unphysical states with |m_s| > |m_c|.
    Scalar imbalance = (std::norm(v.c.m_c) - std::norm(v.c.m_s)) / k.d;
    if (sign > 0)
        imbalance = abs(imbalance);
    const Scalar bracket = imbalance + sign;
    const Scalar radius =
        sqrt(Scalar(0.25) * bracket * bracket + std::norm(v.v2.m - k.c / k.d));
    return v.v2.n - (k.s / k.d + radius);
}

} // namespace detail

template <typename Scalar>
struct PhysicalityMargins {
    Scalar first_line{0};   ///< n1 - sqrt(|m1|^2 + 1/4)
    Scalar second_line{0};  ///< n2 minus the Schur-complement bound
};

template <typename Scalar>
PhysicalityMargins<Scalar> physicality_margins(const BipartiteCovariance<Scalar>& v)
{
    using std::sqrt;
    PhysicalityMargins<Scalar> out;
    out.first_line = v.v1.n - sqrt(std::norm(v.v1.m) + Scalar(0.25));
    try {
        out.second_line = detail::second_line_margin(v, scd(v), Scalar(-1));
    } catch (const SingularConfigurationError&) {
        out.second_line = physicality_eigenvalue(v);
    }
    return out;
}

/// Margin of the second physicality inequality; >= 0 iff V + E/2 >= 0 (given
/// the first line holds). Falls back to the eigenvalue test when d = 0.
template <typename Scalar>
Scalar physicality_margin(const BipartiteCovariance<Scalar>& v)
{
    return physicality_margins(v).second_line;
}

/// Negative means entangled, nonnegative separable. Falls back to the
/// eigenvalue test when d = 0.
template <typename Scalar>
Scalar separability_margin(const BipartiteCovariance<Scalar>& v)
{
    try {
        return detail::second_line_margin(v, scd(v), Scalar(1));
    } catch (const SingularConfigurationError&) {
        return separability_eigenvalue(v);
    }
}

/// Separability margin over a (r, theta) grid: mode 1 prepared by `mode1`,
/// mode 2 thermal at `mode2.nbar` squeezed by each r in `r_grid` (mode2.r is
/// ignored), mixed by the coupling beam splitter at each theta.
/// Row i corresponds to r_grid[i], column j to theta_grid[j].
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
entanglement_surface(const SqueezedThermalSpec<Scalar>& mode1,
                     const SqueezedThermalSpec<Scalar>& mode2, std::span<const Scalar> theta_grid,
                     std::span<const Scalar> r_grid)
{
    if (theta_grid.empty() || r_grid.empty())
        throw DomainError("entanglement_surface: grids must be nonempty");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(r_grid.size(), theta_grid.size());
    const ModeCovariance<Scalar> v1 = squeezed_thermal_cov(mode1);
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const auto v2 = squeezed_thermal_cov(SqueezedThermalSpec<Scalar>{mode2.nbar, r_grid[i]});
        const auto input = product_state(v1, v2);
        for (std::size_t j = 0; j < theta_grid.size(); ++j) {
            const auto evolved =
                evolve_beam_splitter(input, BeamSplitterParams<Scalar>::coupling(theta_grid[j]));
            out(i, j) = separability_margin(evolved);
        }
    }
    return out;
}

} // namespace thermoion
