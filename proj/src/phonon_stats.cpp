#include "thermoion/phonon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "thermoion/errors.hpp"

namespace thermoion {

namespace {

// Below this series argument the 2F1 sum converges in a few thousand terms.
constexpr double series_route_limit = 0.99;

// Extra recurrence steps allowed when summing the tail past k_max.
constexpr int tail_step_cap = 4'000'000;

} // namespace

std::optional<double> ProbeCoefficients::gaussian_a() const
{
    const double det = determinant();
    if (!(det > 0))
        return std::nullopt;
    return 1 + a / det;
}

std::optional<double> ProbeCoefficients::gaussian_b() const
{
    const double det = determinant();
    if (!(det > 0))
        return std::nullopt;
    return b / det;
}

double ProbeCoefficients::series_argument() const
{
    const double al = alpha();
    if (b == 0)
        return 0;
    return (b / al) * (b / al);
}

ProbeCoefficients probe_coefficients(double nbar1, double nbar2, double r, double theta)
{
    if (!(nbar1 >= 0 && nbar2 >= 0))
        throw DomainError("probe_coefficients: occupations must be >= 0");
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double nu2 = nbar2 + 0.5;
    return {nbar1 * c2 + s2 * (nu2 * std::cosh(2 * r) - 0.5),
            nu2 * std::sinh(2 * std::abs(r)) * s2};
}

ProbeCoefficients probe_coefficients(const ModeCovarianced& probe)
{
    return {probe.n - 0.5, std::abs(probe.m)};
}

long double hypergeometric_probe_series(int k, long double z, long double rel_tol)
{
    if (k < 0)
        throw DomainError("hypergeometric_probe_series: k must be >= 0");
    if (!(z >= 0 && z < 1))
        throw InconsistencyError("hypergeometric_probe_series: argument (B/A)^2 = " +
                                 std::to_string(static_cast<double>(z)) +
                                 " outside [0, 1); probe state is not classical");
    const long double p = 0.5L * (k + 1);
    const long double q = 0.5L * (k + 2);

    // Kahan-compensated sum of t_n, t_{n+1} = t_n z (n+p)(n+q)/(n+1)^2.
    long double sum = 1;
    long double carry = 0;
    long double term = 1;
    for (long n = 0;; ++n) {
        const long double ratio = z * (n + p) * (n + q) / ((n + 1.0L) * (n + 1.0L));
        term *= ratio;
        const long double y = term - carry;
        const long double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        // Ratios approach z monotonically, so the tail is dominated by a
        // geometric series with ratio max(ratio, z) once that is below 1.
        const long double bound_ratio = std::max(ratio, z);
        if (bound_ratio < 1 && term * bound_ratio / (1 - bound_ratio) <= rel_tol * sum)
            break;
        if (term == 0)
            break;
    }
    return sum;
}

double prob_hypergeometric(const ProbeCoefficients& coef, int k)
{
    if (k < 0)
        throw DomainError("prob_hypergeometric: k must be >= 0");
    if (coef.a == 0 && coef.b == 0)
        return k == 0 ? 1.0 : 0.0;
    const long double det = static_cast<long double>(coef.a) * coef.a -
                            static_cast<long double>(coef.b) * coef.b;
    if (!(det > 0))
        throw InconsistencyError("prob_hypergeometric: a^2 - b^2 <= 0, series representation "
                                 "does not exist");
    const long double alpha = det + coef.a;
    const long double z = (coef.b / alpha) * (coef.b / alpha);
    // 1 / (A^{k+1} sqrt(D)) = D^{k+1/2} / alpha^{k+1}
    const long double log_prefactor = (k + 0.5L) * std::log(det) - (k + 1.0L) * std::log(alpha);
    return static_cast<double>(std::exp(log_prefactor) * hypergeometric_probe_series(k, z));
}

double prob_closed_form(const ProbeCoefficients& coef, int k)
{
    if (k < 0)
        throw DomainError("prob_closed_form: k must be >= 0");
    if (coef.determinant() > 0 && coef.series_argument() < series_route_limit)
        return prob_hypergeometric(coef, k);
    std::vector<double> probs(static_cast<std::size_t>(k) + 1);
    probe_probabilities<double>(coef.a, coef.b, probs);
    return probs.back();
}

double PhononDistribution::total() const
{
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

double PhononDistribution::mean() const
{
    double m = 0;
    for (std::size_t k = 0; k < probs.size(); ++k)
        m += static_cast<double>(k) * probs[k];
    return m;
}

PhononDistribution distribution(const ProbeCoefficients& coef, int k_max)
{
    if (k_max < 1)
        throw DomainError("distribution: k_max must be >= 1");
    if (!(coef.a >= 0 && coef.b >= 0))
        throw DomainError("distribution: coefficients must be nonnegative");

    PhononDistribution out;
    out.k_max = k_max;
    out.probs.resize(static_cast<std::size_t>(k_max) + 1);
    probe_probabilities<double>(coef.a, coef.b, out.probs);
    for (double& p : out.probs)
        p = std::clamp(p, 0.0, 1.0);

    // Continue the recurrence to sum the tail directly.
    const double b2 = coef.b * coef.b;
    const double q = (1 + coef.a) * (1 + coef.a) - b2;
    const double alpha = coef.alpha();
    const double u = alpha / q;
    const double v = (alpha * alpha - b2) / (q * q);
    double prev = k_max >= 1 ? out.probs[k_max - 1] : 0;
    double cur = out.probs[k_max];
    double tail = 0;
    bool converged = false;
    for (int n = k_max; n < k_max + tail_step_cap; ++n) {
        const double nd = n;
        const double next = ((2 * nd + 1) * u * cur - nd * v * prev) / (nd + 1);
        tail += std::max(next, 0.0);
        prev = cur;
        cur = next;
        // Pairs of terms, since squeezed states put zero weight on odd k.
        if (n > k_max && prev + cur <= 1e-17 * std::max(tail, 1e-300)) {
            converged = true;
            break;
        }
    }
    out.tail_mass = converged ? tail : std::max(0.0, 1.0 - out.total());
    return out;
}

PhononDistribution distribution_adaptive(const ProbeCoefficients& coef, double tail_tol,
                                         int k_start)
{
    int k_max = std::max(k_start, 1);
    for (;;) {
        PhononDistribution d = distribution(coef, k_max);
        if (d.tail_mass < tail_tol)
            return d;
        if (k_max > (1 << 24))
            throw TruncationError("distribution_adaptive: tail mass " +
                                  std::to_string(d.tail_mass) + " still above tolerance at k_max " +
                                  std::to_string(k_max));
        k_max *= 2;
    }
}

std::vector<int> sample(const PhononDistribution& dist, std::size_t count, std::uint64_t seed)
{
    const double total = dist.total();
    if (std::abs(total + dist.tail_mass - 1) > 1e-6 || std::abs(total - 1) > 1e-6)
        throw DomainError("sample: distribution is not normalized (sum = " +
                          std::to_string(total) + ", tail = " + std::to_string(dist.tail_mass) +
                          ")");
    std::vector<double> cdf(dist.probs.size());
    std::partial_sum(dist.probs.begin(), dist.probs.end(), cdf.begin());
    for (double& c : cdf)
        c /= total;
    cdf.back() = 1.0;

    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<int> out(count);
    for (int& x : out) {
        const double u = uniform(engine);
        x = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        x = std::min(x, dist.k_max);
    }
    return out;
}

} // namespace thermoion
