#pragma once

// Two-mode zero-mean Gaussian states in the complex (a, a^dagger) covariance
// representation, and their evolution under the beam-splitter Bogoliubov map.
//
// Ordering of the operator vector is v = (a1, a1^+, a2, a2^+) and the
// covariance matrix is V_ij = (-1)^{i+j} <{v_i, v_j^+}>/2, so that
//
//         | n1   m1   m_s   m_c  |
//     V = | m1*  n1   m_c*  m_s* |
//         | m_s* m_c  n2    m2   |
//         | m_c* m_s  m2*   n2   |
//
// with n = <{a, a^+}>/2, m = -<a^2>, m_s = <a1 a2^+>, m_c = -<a1 a2>.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "thermoion/constants.hpp"
#include "thermoion/errors.hpp"

namespace thermoion {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Local 2x2 block [[n, m], [m*, n]] of one vibrational mode.
template <typename Scalar>
struct ModeCovariance {
    using Complex = std::complex<Scalar>;

    Scalar n{0.5};
    Complex m{0};

    Matrix2c<Scalar> matrix() const
    {
        Matrix2c<Scalar> out;
        out << Complex(n), m, std::conj(m), Complex(n);
        return out;
    }

    friend bool operator==(const ModeCovariance&, const ModeCovariance&) = default;
};

/// Inter-mode block C = [[m_s, m_c], [m_c*, m_s*]].
template <typename Scalar>
struct CorrelationBlock {
    using Complex = std::complex<Scalar>;

    Complex m_s{0};
    Complex m_c{0};

    Matrix2c<Scalar> matrix() const
    {
        Matrix2c<Scalar> out;
        out << m_s, m_c, std::conj(m_c), std::conj(m_s);
        return out;
    }

    friend bool operator==(const CorrelationBlock&, const CorrelationBlock&) = default;
};

template <typename Scalar>
struct BipartiteCovariance {
    ModeCovariance<Scalar> v1;
    ModeCovariance<Scalar> v2;
    CorrelationBlock<Scalar> c;

    friend bool operator==(const BipartiteCovariance&, const BipartiteCovariance&) = default;
};

/// Mixing angle theta = g t and the two phases of the R and S blocks.
template <typename Scalar>
struct BeamSplitterParams {
    Scalar theta{0};
    Scalar phi0{0};
    Scalar phi1{0};

    /// Ion-ion coupling H = hbar g (a1 a2^+ + a1^+ a2) in the phase convention
    /// phi0 = phi1 = 0 used for the thermometry pipeline.
    static BeamSplitterParams coupling(Scalar theta) { return {theta, Scalar(0), Scalar(0)}; }

    /// Phases reproducing U(theta) = exp[-i theta (a1 a2^+ + a1^+ a2)] exactly
    /// (U a1 U^+ = cos(theta) a1 + i sin(theta) a2). Differs from coupling()
    /// by a local pi/2 rotation of mode 2.
    static BeamSplitterParams exact_unitary(Scalar theta)
    {
        return {theta, Scalar(0), std::numbers::pi_v<Scalar> / 2};
    }
};

/// Local preparation: thermal occupation nbar followed by squeezing r.
template <typename Scalar>
struct SqueezedThermalSpec {
    Scalar nbar{0};
    Scalar r{0};
};

enum class Mode { first = 1, second = 2 };

using ModeCovarianced = ModeCovariance<double>;
using CorrelationBlockd = CorrelationBlock<double>;
using BipartiteCovarianced = BipartiteCovariance<double>;
using BeamSplitterParamsd = BeamSplitterParams<double>;
using SqueezedThermalSpecd = SqueezedThermalSpec<double>;

// -- single-mode predicates and constructors ---------------------------------

template <typename Scalar>
bool is_physical_single_mode(const ModeCovariance<Scalar>& v, Scalar tol = Scalar(0))
{
    using std::sqrt;
    return v.n >= sqrt(std::norm(v.m) + Scalar(0.25)) - tol;
}

template <typename Scalar>
ModeCovariance<Scalar> thermal_cov(Scalar nbar)
{
    if (!(nbar >= Scalar(0)))
        throw DomainError("thermal_cov: mean occupation must be >= 0");
    return {nbar + Scalar(0.5), {}};
}

/// Covariance of S(r) rho_th S(r)^+ with S(r) = exp[(r/2)(a^2 - a^+2)]:
/// n = (nbar + 1/2) cosh 2r, m = (nbar + 1/2) sinh 2r.
template <typename Scalar>
ModeCovariance<Scalar> squeezed_thermal_cov(const SqueezedThermalSpec<Scalar>& spec)
{
    using std::cosh;
    using std::sinh;
    const Scalar nu = thermal_cov(spec.nbar).n;
    return {nu * cosh(2 * spec.r), {nu * sinh(2 * spec.r), Scalar(0)}};
}

// -- 4x4 assembly --------------------------------------------------------------

/// E = diag(Z, Z), Z = diag(1, -1).
template <typename Scalar>
Matrix4c<Scalar> symplectic_form()
{
    using Complex = std::complex<Scalar>;
    return Eigen::Matrix<Complex, 4, 1>(Complex(1), Complex(-1), Complex(1), Complex(-1))
        .asDiagonal();
}

/// Partial phase-space mirror reflection T = diag(I, X): swaps a2 and a2^+.
template <typename Scalar>
Matrix4c<Scalar> partial_reflection()
{
    Matrix4c<Scalar> t = Matrix4c<Scalar>::Zero();
    t(0, 0) = t(1, 1) = 1;
    t(2, 3) = t(3, 2) = 1;
    return t;
}

template <typename Scalar>
Matrix4c<Scalar> assemble(const BipartiteCovariance<Scalar>& v)
{
    Matrix4c<Scalar> out;
    const Matrix2c<Scalar> c = v.c.matrix();
    out << v.v1.matrix(), c, c.adjoint(), v.v2.matrix();
    return out;
}

/// Reads the (n, m) parametrization back out of an assembled 4x4 matrix.
/// Only the upper triangle is consulted.
template <typename Scalar>
BipartiteCovariance<Scalar> disassemble(const Matrix4c<Scalar>& v)
{
    BipartiteCovariance<Scalar> out;
    out.v1 = {std::real(v(0, 0)), v(0, 1)};
    out.v2 = {std::real(v(2, 2)), v(2, 3)};
    out.c = {v(0, 2), v(0, 3)};
    return out;
}

/// Applies the (-1)^{i+j} sign convention to the matrix of symmetrized moments
/// <{v_i, v_j^+}>/2. This is the only place the convention is encoded.
template <typename Scalar>
BipartiteCovariance<Scalar> covariance_from_moments(const Matrix4c<Scalar>& half_anticommutators)
{
    Matrix4c<Scalar> signed_moments = half_anticommutators;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if ((i + j) % 2 != 0)
                signed_moments(i, j) = -signed_moments(i, j);
    return disassemble(signed_moments);
}

// -- Bogoliubov evolution ------------------------------------------------------

/// M = [[R, S], [-S*, R*]], R = cos(theta) diag(e^{i phi0}, e^{-i phi0}),
/// S = sin(theta) diag(e^{i phi1}, e^{-i phi1}).
template <typename Scalar>
Matrix4c<Scalar> bogoliubov_matrix(const BeamSplitterParams<Scalar>& p)
{
    using std::cos;
    using std::sin;
    using Complex = std::complex<Scalar>;
    const Complex r0 = cos(p.theta) * std::polar(Scalar(1), p.phi0);
    const Complex s0 = sin(p.theta) * std::polar(Scalar(1), p.phi1);
    Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
    m(0, 0) = r0;
    m(1, 1) = std::conj(r0);
    m(0, 2) = s0;
    m(1, 3) = std::conj(s0);
    m(2, 0) = -std::conj(s0);
    m(3, 1) = -s0;
    m(2, 2) = std::conj(r0);
    m(3, 3) = r0;
    return m;
}

/// V' = M^{-1} V M. M is unitary, so M^{-1} = M^+. For C = 0 inputs this is
/// V1' = R* V1 R + S V2 S*, V2' = S* V1 S + R V2 R*, C' = R* V1 S - S V2 R*.
template <typename Scalar>
BipartiteCovariance<Scalar> evolve_beam_splitter(const BipartiteCovariance<Scalar>& v,
                                                 const BeamSplitterParams<Scalar>& p)
{
    const Matrix4c<Scalar> m = bogoliubov_matrix(p);
    const Matrix4c<Scalar> out = m.adjoint() * assemble(v) * m;
    return disassemble(out);
}

template <typename Scalar>
ModeCovariance<Scalar> reduce_mode(const BipartiteCovariance<Scalar>& v, Mode which)
{
    return which == Mode::first ? v.v1 : v.v2;
}

template <typename Scalar>
BipartiteCovariance<Scalar> product_state(const ModeCovariance<Scalar>& v1,
                                          const ModeCovariance<Scalar>& v2)
{
    return {v1, v2, {}};
}

/// Smallest eigenvalue of V + E/2; nonnegative iff the covariance is a valid
/// quantum state.
template <typename Scalar>
Scalar physicality_eigenvalue(const BipartiteCovariance<Scalar>& v)
{
    const Matrix4c<Scalar> h = assemble(v) + symplectic_form<Scalar>() / Scalar(2);
    Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

template <typename Scalar>
bool is_physical(const BipartiteCovariance<Scalar>& v, Scalar tol = Scalar(1e-10))
{
    return physicality_eigenvalue(v) >= -tol;
}

/// Symplectic eigenvalues of the two-mode covariance: the moduli of the
/// eigenvalues of E V, each appearing twice.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> symplectic_eigenvalues(const BipartiteCovariance<Scalar>& v)
{
    const Matrix4c<Scalar> ev = symplectic_form<Scalar>() * assemble(v);
    Eigen::ComplexEigenSolver<Matrix4c<Scalar>> solver(ev, false);
    Eigen::Matrix<Scalar, 4, 1> moduli = solver.eigenvalues().cwiseAbs();
    std::sort(moduli.data(), moduli.data() + 4);
    return {moduli(0), moduli(2)};
}

// -- physical coupling -----------------------------------------------------------

/// g = q^2 / (4 pi eps0 m omega d^3), in rad/s.
template <typename Scalar>
Scalar coupling_constant(Scalar charge, Scalar mass, Scalar omega, Scalar separation)
{
    if (!(charge > 0 && mass > 0 && omega > 0 && separation > 0))
        throw DomainError("coupling_constant: charge, mass, frequency and separation must be > 0");
    return Scalar(codata::coulomb_constant) * charge * charge /
           (mass * omega * separation * separation * separation);
}

} // namespace thermoion
