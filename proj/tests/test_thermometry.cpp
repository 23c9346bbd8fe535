#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <thermoion/constants.hpp>
#include <thermoion/fock_oracle.hpp>
#include <thermoion/thermometry.hpp>

using namespace thermoion;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double omega = 4e6;

TrapConfig config(double theta, double r, double t2 = 2.08e-5)
{
    TrapConfig cfg;
    cfg.theta = theta;
    cfg.r = r;
    cfg.t2 = t2;
    return cfg;
}

// Fisher matrix from central differences of the probabilities themselves.
FisherMatrix fisher_by_differences(const TrapConfig& cfg)
{
    auto probs = [](TrapConfig c) { return distribution(probe_coefficients(c), c.k_max).probs; };
    TrapConfig lo = cfg, hi = cfg;
    const double h1 = cfg.t1 * 1e-5;
    lo.t1 -= h1;
    hi.t1 += h1;
    const auto d1_lo = probs(lo), d1_hi = probs(hi);
    lo = cfg, hi = cfg;
    const double h2 = cfg.t2 * 1e-5;
    lo.t2 -= h2;
    hi.t2 += h2;
    const auto d2_lo = probs(lo), d2_hi = probs(hi);
    const auto p = probs(cfg);
    FisherMatrix f;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] < 1e-30)
            continue;
        const double g1 = (d1_hi[k] - d1_lo[k]) / (2 * h1);
        const double g2 = (d2_hi[k] - d2_lo[k]) / (2 * h2);
        f.f11 += g1 * g1 / p[k];
        f.f22 += g2 * g2 / p[k];
        f.f12 += g1 * g2 / p[k];
    }
    return f;
}

} // namespace

TEST_CASE("occupation from temperature")
{
    const double t_ln2 = codata::hbar * omega / (codata::boltzmann * std::log(2.0));
    CHECK(occupation_from_temperature(t_ln2, omega) == Approx(1.0).epsilon(1e-14));

    const double t_cold = codata::hbar * omega / (codata::boltzmann * 60);
    CHECK(occupation_from_temperature(t_cold, omega) < std::exp(-50.0));
    CHECK(occupation_from_temperature(t_cold, omega) > 0.0);

    CHECK(occupation_from_temperature(2.8e-5, omega) == Approx(0.50561891211415476).epsilon(1e-13));
    CHECK(occupation_from_temperature(2.08e-5, omega) == Approx(0.29900604475080843).epsilon(1e-13));

    CHECK(occupation_from_temperature(5.6e-5, 2 * omega) ==
          Approx(occupation_from_temperature(2.8e-5, omega)).epsilon(1e-15));

    CHECK_THROWS_AS(occupation_from_temperature(0.0, omega), DomainError);
    CHECK_THROWS_AS(occupation_from_temperature(1e-5, -1.0), DomainError);
}

TEST_CASE("occupation derivative")
{
    const double t = 2.8e-5;
    const double h = t * 1e-5;
    const double fd = (occupation_from_temperature(t + h, omega) -
                       occupation_from_temperature(t - h, omega)) / (2 * h);
    const double d = occupation_temperature_derivative(t, omega);
    CHECK(d == Approx(fd).epsilon(1e-6));
    CHECK(d == Approx(29667.105632183678).epsilon(1e-12));
    for (double tt : {1e-7, 1e-6, 1e-5, 1e-3, 1.0})
        CHECK(occupation_temperature_derivative(tt, omega) >= 0.0);
    CHECK(occupation_temperature_derivative(1e-5, omega) > 0.0);
    CHECK(occupation_temperature_derivative(2 * t, 2 * omega) == Approx(d / 2).epsilon(1e-14));
    CHECK_THROWS_AS(occupation_temperature_derivative(-1.0, omega), DomainError);
}

TEST_CASE("trap configuration")
{
    TrapConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.angular_frequency() == omega);
    cfg.convention = OmegaConvention::ordinary;
    CHECK(cfg.angular_frequency() == Approx(2 * pi * omega).epsilon(1e-15));

    for (auto bad : {&TrapConfig::omega, &TrapConfig::t1, &TrapConfig::t2}) {
        TrapConfig c;
        c.*bad = 0.0;
        CHECK_THROWS_AS(c.validate(), DomainError);
    }
    TrapConfig c;
    c.k_max = 0;
    CHECK_THROWS_WITH_AS(c.validate(), "k_max must be >= 1", DomainError);
}

TEST_CASE("Fisher matrix special angles")
{
    for (double r : {0.0, 0.5}) {
        const auto f0 = fisher_matrix(config(0.0, r));
        CHECK(f0.f22 == 0.0);
        CHECK(f0.f12 == 0.0);
        CHECK(f0.f11 > 0.0);

        for (double t2 : {0.5e-5, 2e-5, 4e-5}) {
            const auto f = fisher_matrix(config(pi / 2, r, t2));
            CHECK(std::abs(f.f11) < 1e-12);
            CHECK(std::abs(f.f12) < 1e-12);
            CHECK(f.f22 > 0.0);
        }
    }
}

TEST_CASE("Fisher matrix regression at theta = pi/4")
{
    // Frozen after agreement of the analytic and difference quotients below.
    const auto f = fisher_matrix(config(pi / 4, 0.0));
    CHECK(f.f11 == Approx(390015675.72805795).epsilon(1e-10));
    CHECK(f.f22 == Approx(333400607.09472168).epsilon(1e-10));
    CHECK(f.f12 == Approx(360598756.32646409).epsilon(1e-10));
    CHECK(f.determinant() >= -1e-10 * f.f11 * f.f22);
}

TEST_CASE("analytic and finite-difference Fisher agree")
{
    for (double theta : {0.3, pi / 4, 1.2, 2.0})
        for (double r : {0.0, 0.25, 0.8}) {
            const auto cfg = config(theta, r);
            const auto f = fisher_matrix(cfg);
            const auto g = fisher_by_differences(cfg);
            CHECK(f.f11 == Approx(g.f11).epsilon(1e-5));
            CHECK(f.f22 == Approx(g.f22).epsilon(1e-5));
            CHECK(f.f12 == Approx(g.f12).epsilon(1e-5));
        }
}

TEST_CASE("swap Fisher equals the single-mode Fisher of ion 2")
{
    for (double r : {0.0, 0.4}) {
        const double t2 = 2.5e-5;
        const double h = t2 * 1e-5;
        auto p = [&](double t) {
            return fock::squeezed_thermal_number_distribution(occupation_from_temperature(t, omega), r);
        };
        const auto lo = p(t2 - h), mid = p(t2), hi = p(t2 + h);
        double oracle = 0;
        // Below 1e-13 the differences are rounding noise; the dropped
        // contributions are far below the tolerance.
        const std::size_t n = std::min({lo.size(), mid.size(), hi.size(), std::size_t{201}});
        for (std::size_t k = 0; k < n; ++k)
            if (mid[k] > 1e-13) {
                const double g = (hi[k] - lo[k]) / (2 * h);
                oracle += g * g / mid[k];
            }
        CHECK(fisher_matrix(config(pi / 2, r, t2)).f22 == Approx(oracle).epsilon(1e-5));
    }
}

TEST_CASE("Fisher symmetry and periodicity")
{
    for (double theta : {0.2, 0.7, 1.3})
        for (double r : {0.0, 0.5}) {
            const auto f = fisher_matrix(config(theta, r));
            const auto g = fisher_matrix(config(pi - theta, r));
            const auto h = fisher_matrix(config(theta + pi, r));
            CHECK(g.f11 == Approx(f.f11).epsilon(1e-9));
            CHECK(g.f22 == Approx(f.f22).epsilon(1e-9));
            CHECK(g.f12 == Approx(f.f12).epsilon(1e-9));
            CHECK(h.f11 == Approx(f.f11).epsilon(1e-9));
            CHECK(h.f22 == Approx(f.f22).epsilon(1e-9));
            CHECK(h.f12 == Approx(f.f12).epsilon(1e-9));
        }
}

TEST_CASE("truncation")
{
    TrapConfig cfg = config(pi / 4, 1.0, 4e-5);
    double previous = 0;
    for (int k_max : {120, 200, 400}) {
        cfg.k_max = k_max;
        const auto f = fisher_matrix(cfg);
        CHECK(f.f22 >= previous);
        previous = f.f22;
    }
    cfg.k_max = 3;
    CHECK_THROWS_AS(fisher_matrix(cfg), TruncationError);
}

TEST_CASE("Cramer-Rao bounds")
{
    const auto unit = cramer_rao(FisherMatrix{1, 1, 0});
    CHECK(unit.t1_printed == 1.0);
    CHECK(unit.t1_standard == 1.0);
    const auto zero = cramer_rao(FisherMatrix{0, 4, 0});
    CHECK(zero.t1_printed == std::numeric_limits<double>::infinity());
    CHECK(zero.t1_standard == std::numeric_limits<double>::infinity());
    CHECK(zero.t2_printed == 0.5);
    CHECK(zero.t2_standard == 0.25);
}

TEST_CASE("Fisher sweep")
{
    const std::vector<double> grid{0.1, 0.5, 0.9};
    const auto a = fisher_sweep(config(0, 0.25), SweepAxis::theta, grid);
    const auto b = fisher_sweep(config(0, 0.25), SweepAxis::theta, grid);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a[i].f11 == b[i].f11);
        CHECK(a[i].f22 == fisher_matrix(config(grid[i], 0.25)).f22);
    }
    const std::vector<double> temps{1e-5, 3e-5};
    const auto t = fisher_sweep(config(pi / 4, 0.0), SweepAxis::t2, temps);
    CHECK(t[1].f11 == fisher_matrix(config(pi / 4, 0.0, 3e-5)).f11);
    CHECK_THROWS_AS(fisher_sweep(config(0, 0), SweepAxis::t2, {}), DomainError);
}
