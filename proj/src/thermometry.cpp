#include "thermoion/thermometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/AutoDiff>

#include "thermoion/constants.hpp"
#include "thermoion/errors.hpp"

namespace thermoion {

namespace {

using Dual = Eigen::AutoDiffScalar<Eigen::Vector2d>;

double reduced_energy(double t, double omega)
{
    if (!(t > 0))
        throw DomainError("temperature must be > 0, got " + std::to_string(t));
    if (!(omega > 0))
        throw DomainError("trap frequency must be > 0, got " + std::to_string(omega));
    return codata::hbar * omega / (codata::boltzmann * t);
}

} // namespace

double TrapConfig::angular_frequency() const
{
    return convention == OmegaConvention::ordinary ? 2 * std::numbers::pi * omega : omega;
}

void TrapConfig::validate() const
{
    if (!(omega > 0))
        throw DomainError("omega must be > 0");
    if (!(t1 > 0))
        throw DomainError("t1 must be > 0");
    if (!(t2 > 0))
        throw DomainError("t2 must be > 0");
    if (!std::isfinite(r))
        throw DomainError("r must be finite");
    if (!std::isfinite(theta))
        throw DomainError("theta must be finite");
    if (k_max < 1)
        throw DomainError("k_max must be >= 1");
}

double occupation_from_temperature(double t, double omega)
{
    const double x = reduced_energy(t, omega);
    return 1 / std::expm1(x);
}

double occupation_temperature_derivative(double t, double omega)
{
    const double x = reduced_energy(t, omega);
    if (x > 700)
        return 0;
    const double em1 = std::expm1(x);
    return (x / t) * (em1 + 1) / (em1 * em1);
}

ProbeCoefficients probe_coefficients(const TrapConfig& cfg)
{
    cfg.validate();
    const double w = cfg.angular_frequency();
    return probe_coefficients(occupation_from_temperature(cfg.t1, w),
                              occupation_from_temperature(cfg.t2, w), cfg.r, cfg.theta);
}

LikelihoodGradient log_likelihood_gradient(const TrapConfig& cfg)
{
    cfg.validate();
    const double w = cfg.angular_frequency();
    const double dn1 = occupation_temperature_derivative(cfg.t1, w);
    const double dn2 = occupation_temperature_derivative(cfg.t2, w);
    const ProbeCoefficients coef = probe_coefficients(cfg);

    const double c2 = std::cos(cfg.theta) * std::cos(cfg.theta);
    const double s2 = std::sin(cfg.theta) * std::sin(cfg.theta);
    const double da_dt1 = c2 * dn1;
    const double da_dt2 = s2 * std::cosh(2 * cfg.r) * dn2;
    const double db_dt2 = s2 * std::sinh(2 * std::abs(cfg.r)) * dn2;

    const std::size_t size = static_cast<std::size_t>(cfg.k_max) + 1;
    std::vector<Dual> p(size);
    probe_probabilities<Dual>(Dual(coef.a, 2, 0), Dual(coef.b, 2, 1), p);

    LikelihoodGradient out;
    out.probs.resize(size);
    out.d_t1.assign(size, 0.0);
    out.d_t2.assign(size, 0.0);
    for (std::size_t k = 0; k < size; ++k) {
        const double pk = p[k].value();
        out.probs[k] = pk;
        if (!(pk > 0))
            continue;
        const double dp_da = p[k].derivatives()(0);
        const double dp_db = p[k].derivatives()(1);
        out.d_t1[k] = dp_da * da_dt1 / pk;
        out.d_t2[k] = (dp_da * da_dt2 + dp_db * db_dt2) / pk;
    }
    out.tail_mass = distribution(coef, cfg.k_max).tail_mass;
    return out;
}

FisherMatrix fisher_matrix(const TrapConfig& cfg)
{
    const LikelihoodGradient g = log_likelihood_gradient(cfg);
    if (g.tail_mass > fisher_tail_tolerance)
        throw TruncationError("fisher_matrix: tail mass " + std::to_string(g.tail_mass) +
                              " beyond k_max = " + std::to_string(cfg.k_max) +
                              "; increase k_max");
    FisherMatrix f;
    for (std::size_t k = 0; k < g.probs.size(); ++k) {
        const double pk = g.probs[k];
        if (pk < fisher_probability_floor)
            continue;
        f.f11 += pk * g.d_t1[k] * g.d_t1[k];
        f.f22 += pk * g.d_t2[k] * g.d_t2[k];
        f.f12 += pk * g.d_t1[k] * g.d_t2[k];
    }
    return f;
}

CramerRaoBounds cramer_rao(const FisherMatrix& f)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    CramerRaoBounds out;
    out.t1_printed = f.f11 > 0 ? 1 / std::sqrt(f.f11) : inf;
    out.t2_printed = f.f22 > 0 ? 1 / std::sqrt(f.f22) : inf;
    out.t1_standard = f.f11 > 0 ? 1 / f.f11 : inf;
    out.t2_standard = f.f22 > 0 ? 1 / f.f22 : inf;
    return out;
}

std::vector<FisherMatrix> fisher_sweep(const TrapConfig& tmpl, SweepAxis axis,
                                       std::span<const double> grid)
{
    if (grid.empty())
        throw DomainError("fisher_sweep: grid must be nonempty");
    std::vector<FisherMatrix> out;
    out.reserve(grid.size());
    TrapConfig cfg = tmpl;
    for (double x : grid) {
        (axis == SweepAxis::theta ? cfg.theta : cfg.t2) = x;
        out.push_back(fisher_matrix(cfg));
    }
    return out;
}

} // namespace thermoion
