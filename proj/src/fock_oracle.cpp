#include "thermoion/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "thermoion/errors.hpp"

namespace thermoion::fock {

namespace {

using Complex = std::complex<double>;

constexpr int max_single_mode_dim = 4096;
constexpr int max_joint_dim = 160;

int edge_start(int dim)
{
    return dim - std::max(1, dim / 10);
}

std::vector<double> thermal_weights(double nbar, int dim)
{
    if (!(nbar >= 0))
        throw DomainError("thermal weights: nbar must be >= 0");
    std::vector<double> w(static_cast<std::size_t>(dim), 0.0);
    const double ratio = nbar / (1 + nbar);
    double p = 1;
    for (double& x : w) {
        x = p;
        p *= ratio;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w)
        x /= total;
    return w;
}

// exp[(r/2)(a^2 - a^+2)] on the truncated space. The generator only couples
// levels of equal parity, so each parity block is exponentiated separately.
Eigen::MatrixXd squeeze_operator(double r, int dim)
{
    const Eigen::MatrixXd a = annihilation(dim);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd generator = 0.5 * r * (a2 - a2.transpose());

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<int> idx;
        for (int n = parity; n < dim; n += 2)
            idx.push_back(n);
        const Eigen::MatrixXd block = generator(idx, idx);
        const Eigen::MatrixXd exp_block = block.exp();
        out(idx, idx) = exp_block;
    }
    return out;
}

// Two-mode product-basis indices grouped by total phonon number N = n1 + n2.
std::vector<std::vector<int>> number_sectors(int dim)
{
    std::vector<std::vector<int>> sectors(static_cast<std::size_t>(2 * dim - 1));
    for (int n1 = 0; n1 < dim; ++n1)
        for (int n2 = 0; n2 < dim; ++n2)
            sectors[static_cast<std::size_t>(n1 + n2)].push_back(n1 * dim + n2);
    return sectors;
}

// Tr(rho X) for an operator mapping basis state i to coef(i) |target(i)>.
template <typename Map>
Complex expectation(const Eigen::MatrixXcd& rho, Map&& map)
{
    Complex sum = 0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        const auto [target, coef] = map(static_cast<int>(i));
        if (target >= 0 && coef != 0.0)
            sum += rho(i, target) * coef;
    }
    return sum;
}

void check_leakage(const FockState& state, double tol, const char* what)
{
    const double edge = edge_population(state);
    if (edge > tol)
        throw TruncationError(std::string(what) + ": population " + std::to_string(edge) +
                              " in the top Fock levels exceeds " + std::to_string(tol) +
                              " at dim " + std::to_string(state.dim()));
}

} // namespace

FockState::FockState(Eigen::MatrixXcd rho, int dim, int modes)
    : rho_(std::move(rho)), dim_(dim), modes_(modes)
{
}

FockState FockState::single_mode(Eigen::MatrixXcd rho)
{
    if (rho.rows() != rho.cols() || rho.rows() < 2)
        throw DomainError("FockState: density matrix must be square with dim >= 2");
    const int dim = static_cast<int>(rho.rows());
    return FockState(std::move(rho), dim, 1);
}

FockState FockState::two_mode(Eigen::MatrixXcd rho, int dim_per_mode)
{
    if (dim_per_mode < 2 || rho.rows() != rho.cols() ||
        rho.rows() != static_cast<Eigen::Index>(dim_per_mode) * dim_per_mode)
        throw DomainError("FockState: two-mode density matrix must be dim^2 x dim^2");
    return FockState(std::move(rho), dim_per_mode, 2);
}

Eigen::MatrixXd annihilation(int dim)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

FockState thermal_state(double nbar, int dim)
{
    if (dim < 2)
        throw DomainError("thermal_state: dim must be >= 2");
    const std::vector<double> w = thermal_weights(nbar, dim);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        rho(n, n) = w[static_cast<std::size_t>(n)];
    return FockState::single_mode(std::move(rho));
}

FockState number_state(int n, int dim)
{
    if (n < 0 || n >= dim)
        throw DomainError("number_state: n outside the truncation");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(n, n) = 1;
    return FockState::single_mode(std::move(rho));
}

FockState tensor_product(const FockState& mode1, const FockState& mode2)
{
    if (mode1.modes() != 1 || mode2.modes() != 1 || mode1.dim() != mode2.dim())
        throw DomainError("tensor_product: expects two single-mode states of equal dim");
    const int d = mode1.dim();
    const Eigen::MatrixXcd& r1 = mode1.density();
    const Eigen::MatrixXcd& r2 = mode2.density();
    Eigen::MatrixXcd rho(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            rho.block(i * d, j * d, d, d) = r1(i, j) * r2;
    return FockState::two_mode(std::move(rho), d);
}

FockState apply_squeeze(const FockState& state, double r, double leakage_tol)
{
    if (state.modes() != 1)
        throw DomainError("apply_squeeze: expects a single-mode state");
    const Eigen::MatrixXd s = squeeze_operator(r, state.dim());
    FockState out = FockState::single_mode(s * state.density() * s.transpose());
    check_leakage(out, leakage_tol, "apply_squeeze");
    return out;
}

FockState apply_beam_splitter(const FockState& joint, double theta, double leakage_tol)
{
    if (joint.modes() != 2)
        throw DomainError("apply_beam_splitter: expects a two-mode state");
    const int d = joint.dim();

    // Generator a1 a2^+ + a1^+ a2 on the truncated product space.
    Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(d * d, d * d);
    for (int n1 = 1; n1 < d; ++n1)
        for (int n2 = 0; n2 + 1 < d; ++n2) {
            const double amp = std::sqrt(static_cast<double>(n1) * (n2 + 1));
            const int from = n1 * d + n2;
            const int to = (n1 - 1) * d + (n2 + 1);
            generator(to, from) = amp;
            generator(from, to) = amp;
        }

    // The generator commutes with n1 + n2, so exp(-i theta G) is the direct sum
    // of the exponentials of its number-sector blocks.
    const auto sectors = number_sectors(d);
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(sectors.size());
    for (const auto& idx : sectors) {
        const Eigen::MatrixXcd g = generator(idx, idx).cast<Complex>();
        blocks.push_back((Complex(0, -theta) * g).exp());
    }

    const Eigen::MatrixXcd& rho = joint.density();
    Eigen::MatrixXcd out(d * d, d * d);
    for (std::size_t p = 0; p < sectors.size(); ++p)
        for (std::size_t q = 0; q < sectors.size(); ++q) {
            const Eigen::MatrixXcd sub = rho(sectors[p], sectors[q]);
            out(sectors[p], sectors[q]) = blocks[p] * sub * blocks[q].adjoint();
        }
    FockState result = FockState::two_mode(std::move(out), d);
    check_leakage(result, leakage_tol, "apply_beam_splitter");
    return result;
}

FockState partial_trace_mode2(const FockState& joint)
{
    if (joint.modes() != 2)
        throw DomainError("partial_trace_mode2: expects a two-mode state");
    const int d = joint.dim();
    const Eigen::MatrixXcd& rho = joint.density();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int n2 = 0; n2 < d; ++n2)
                out(i, j) += rho(i * d + n2, j * d + n2);
    return FockState::single_mode(std::move(out));
}

FockState partial_trace_mode1(const FockState& joint)
{
    if (joint.modes() != 2)
        throw DomainError("partial_trace_mode1: expects a two-mode state");
    const int d = joint.dim();
    const Eigen::MatrixXcd& rho = joint.density();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int n1 = 0; n1 < d; ++n1)
        out += rho.block(n1 * d, n1 * d, d, d);
    return FockState::single_mode(std::move(out));
}

PhononDistribution number_distribution(const FockState& state)
{
    if (state.modes() != 1)
        throw DomainError("number_distribution: expects a single-mode state");
    PhononDistribution out;
    out.k_max = state.dim() - 1;
    out.probs.resize(static_cast<std::size_t>(state.dim()));
    for (int n = 0; n < state.dim(); ++n)
        out.probs[static_cast<std::size_t>(n)] = state.density()(n, n).real();
    out.tail_mass = 1 - out.total();
    return out;
}

double edge_population(const FockState& state)
{
    const int d = state.dim();
    const int start = edge_start(d);
    const Eigen::VectorXd diag = state.density().diagonal().real();
    if (state.modes() == 1)
        return diag.tail(d - start).sum();
    double mode1 = 0;
    double mode2 = 0;
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
            const double p = diag(n1 * d + n2);
            if (n1 >= start)
                mode1 += p;
            if (n2 >= start)
                mode2 += p;
        }
    return std::max(mode1, mode2);
}

double mean_occupation(const FockState& single)
{
    return mode_covariance(single).n - 0.5;
}

ModeCovarianced mode_covariance(const FockState& single)
{
    if (single.modes() != 1)
        throw DomainError("mode_covariance: expects a single-mode state");
    const Eigen::MatrixXcd& rho = single.density();
    const Complex number = expectation(rho, [](int n) {
        return std::pair<int, double>{n, static_cast<double>(n)};
    });
    const Complex squared = expectation(rho, [](int n) {
        return std::pair<int, double>{n - 2, std::sqrt(static_cast<double>(n) * (n - 1))};
    });
    return {number.real() + 0.5, -squared};
}

BipartiteCovarianced bipartite_covariance(const FockState& joint)
{
    if (joint.modes() != 2)
        throw DomainError("bipartite_covariance: expects a two-mode state");
    const int d = joint.dim();
    const Eigen::MatrixXcd& rho = joint.density();
    auto split = [d](int i) { return std::pair<int, int>{i / d, i % d}; };
    auto index = [d](int n1, int n2) {
        return (n1 < 0 || n2 < 0 || n1 >= d || n2 >= d) ? -1 : n1 * d + n2;
    };

    const Complex n1 = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{i, static_cast<double>(a)};
    });
    const Complex n2 = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{i, static_cast<double>(b)};
    });
    const Complex a1a1 = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{index(a - 2, b), std::sqrt(double(a) * (a - 1))};
    });
    const Complex a2a2 = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{index(a, b - 2), std::sqrt(double(b) * (b - 1))};
    });
    const Complex a1a2dag = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{index(a - 1, b + 1), std::sqrt(double(a) * (b + 1))};
    });
    const Complex a1a2 = expectation(rho, [&](int i) {
        const auto [a, b] = split(i);
        return std::pair<int, double>{index(a - 1, b - 1), std::sqrt(double(a) * b)};
    });

    // Symmetrized moments <{v_i, v_j^+}>/2 for v = (a1, a1^+, a2, a2^+).
    Matrix4c<double> h;
    h(0, 0) = n1 + 0.5;
    h(0, 1) = a1a1;
    h(0, 2) = a1a2dag;
    h(0, 3) = a1a2;
    h(1, 1) = h(0, 0);
    h(1, 2) = std::conj(a1a2);
    h(1, 3) = std::conj(a1a2dag);
    h(2, 2) = n2 + 0.5;
    h(2, 3) = a2a2;
    h(3, 3) = h(2, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j)
            h(i, j) = std::conj(h(j, i));
    return covariance_from_moments(h);
}

FockState squeezed_thermal_state(double nbar, double r, int dim)
{
    for (int d = dim;; d *= 2) {
        try {
            const FockState thermal = thermal_state(nbar, d);
            check_leakage(thermal, default_leakage_tol, "squeezed_thermal_state");
            return apply_squeeze(thermal, r);
        } catch (const TruncationError&) {
            if (2 * d > max_single_mode_dim)
                throw;
        }
    }
}

FockState evolved_joint_state(double nbar1, double nbar2, double r, double theta, int dim)
{
    for (int d = dim;; d *= 2) {
        try {
            const FockState mode1 = thermal_state(nbar1, d);
            check_leakage(mode1, default_leakage_tol, "evolved_joint_state");
            const FockState mode2 = apply_squeeze(thermal_state(nbar2, d), r);
            return apply_beam_splitter(tensor_product(mode1, mode2), theta);
        } catch (const TruncationError&) {
            if (2 * d > max_joint_dim)
                throw;
        }
    }
}

std::vector<double> squeezed_thermal_number_distribution(double nbar, double r, double tol)
{
    for (int d = 64; d <= max_single_mode_dim; d *= 2) {
        const std::vector<double> w = thermal_weights(nbar, d);
        const double ratio = nbar / (1 + nbar);
        if (std::pow(ratio, d) > tol)
            continue;
        const Eigen::MatrixXd s = squeeze_operator(r, d);
        std::vector<double> p(static_cast<std::size_t>(d), 0.0);
        for (int n = 0; n < d; ++n) {
            double acc = 0;
            for (int m = 0; m < d; ++m)
                acc += s(n, m) * s(n, m) * w[static_cast<std::size_t>(m)];
            p[static_cast<std::size_t>(n)] = acc;
        }
        double edge = 0;
        for (int n = edge_start(d); n < d; ++n)
            edge += p[static_cast<std::size_t>(n)];
        if (edge < tol)
            return p;
    }
    throw TruncationError("squeezed_thermal_number_distribution: not converged at dim " +
                          std::to_string(max_single_mode_dim));
}

PhononDistribution probe_number_distribution(double nbar1, double nbar2, double r, double theta,
                                             int k_report, double tol)
{
    if (k_report < 0)
        throw DomainError("probe_number_distribution: k_report must be >= 0");

    // Mode 1 thermal weights, truncated where the geometric tail drops below tol.
    const double ratio1 = nbar1 / (1 + nbar1);
    int d1 = 1;
    if (ratio1 > 0)
        d1 = std::max(1, static_cast<int>(std::ceil(std::log(tol) / std::log(ratio1))) + 1);
    const std::vector<double> p1 = thermal_weights(nbar1, d1);
    const std::vector<double> p2 = squeezed_thermal_number_distribution(nbar2, r, tol);
    const int d2 = static_cast<int>(p2.size());

    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Complex minus_is(0, -s);

    std::vector<double> probs(static_cast<std::size_t>(k_report) + 1, 0.0);
    std::vector<Complex> base{Complex(1)};  // U|0, n2>, indexed by mode-1 count
    std::vector<Complex> psi;
    std::vector<Complex> next;
    for (int n2 = 0; n2 < d2; ++n2) {
        if (n2 > 0) {
            // U|0, n2> = (c a2^+ - i s a1^+) U|0, n2 - 1> / sqrt(n2)
            const int n_old = n2 - 1;
            next.assign(static_cast<std::size_t>(n2) + 1, Complex(0));
            for (int k = 0; k <= n2; ++k) {
                Complex v = 0;
                if (k <= n_old)
                    v += c * std::sqrt(double(n_old + 1 - k)) * base[static_cast<std::size_t>(k)];
                if (k >= 1)
                    v += minus_is * std::sqrt(double(k)) * base[static_cast<std::size_t>(k - 1)];
                next[static_cast<std::size_t>(k)] = v / std::sqrt(double(n2));
            }
            base.swap(next);
        }
        const double w2 = p2[static_cast<std::size_t>(n2)];
        if (w2 < 1e-300)
            continue;
        psi = base;
        for (int n1 = 0; n1 < d1; ++n1) {
            if (n1 > 0) {
                // U|n1, n2> = (c a1^+ - i s a2^+) U|n1 - 1, n2> / sqrt(n1)
                const int n_old = n1 - 1 + n2;
                next.assign(static_cast<std::size_t>(n_old) + 2, Complex(0));
                for (int k = 0; k <= n_old + 1; ++k) {
                    Complex v = 0;
                    if (k >= 1)
                        v += c * std::sqrt(double(k)) * psi[static_cast<std::size_t>(k - 1)];
                    if (k <= n_old)
                        v += minus_is * std::sqrt(double(n_old + 1 - k)) *
                             psi[static_cast<std::size_t>(k)];
                    next[static_cast<std::size_t>(k)] = v / std::sqrt(double(n1));
                }
                psi.swap(next);
            }
            const double w = w2 * p1[static_cast<std::size_t>(n1)];
            const int k_top = std::min<int>(k_report, static_cast<int>(psi.size()) - 1);
            for (int k = 0; k <= k_top; ++k)
                probs[static_cast<std::size_t>(k)] += w * std::norm(psi[static_cast<std::size_t>(k)]);
        }
    }

    PhononDistribution out;
    out.k_max = k_report;
    out.probs = std::move(probs);
    out.tail_mass = 1 - out.total();
    return out;
}

} // namespace thermoion::fock
