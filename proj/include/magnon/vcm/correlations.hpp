#pragma once

#include "../core/errors.hpp"
#include "../core/pure_state.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>

namespace magnon::vcm {

using core::Complex;
using core::Mask;
using core::PureState;

enum class Pauli { x = 0, y = 1, z = 2 };

inline constexpr std::array<Pauli, 3> kPaulis{Pauli::x, Pauli::y, Pauli::z};

inline constexpr char pauli_name(Pauli p) noexcept
{
    return p == Pauli::x ? 'x' : (p == Pauli::y ? 'y' : 'z');
}

/// Pauli matrix in the local basis (|down>, |up>) = (bit 0, bit 1).
inline Eigen::Matrix2cd pauli_matrix(Pauli p)
{
    const Complex i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (p) {
    case Pauli::x:
        m << 0.0, 1.0, 1.0, 0.0;
        break;
    case Pauli::y:
        // sigma_y|down> = -i|up>, sigma_y|up> = i|down>
        m << 0.0, i, -i, 0.0;
        break;
    case Pauli::z:
        m << -1.0, 0.0, 0.0, 1.0;
        break;
    }
    return m;
}

inline void check_site(const PureState& state, int site)
{
    if (site < 1 || site > state.sites()) {
        throw InputError("site " + std::to_string(site) + " outside 1.." +
                               std::to_string(state.sites()));
    }
}

/// rho(l)_{ab} = sum_rest psi(a, rest) conj(psi(b, rest)), a,b the bit on site l.
inline Eigen::Matrix2cd one_site_rdm(const PureState& state, int site)
{
    check_site(state, site);
    const Mask bit = core::site_bit(site);
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    state.for_each_amplitude([&](Mask mask, Complex amp) {
        const int a = (mask & bit) ? 1 : 0;
        rho(a, a) += std::norm(amp);
        if (a == 0) {
            const Complex partner = state.amplitude(mask | bit);
            rho(0, 1) += amp * std::conj(partner);
        }
    });
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

/// Two-site reduced density matrix on (l, l') with local index a = bit_l + 2 bit_l'.
/// Accumulates in the state's storage order, so the result is reproducible.
inline Eigen::Matrix4cd two_site_rdm(const PureState& state, int site_a, int site_b)
{
    check_site(state, site_a);
    check_site(state, site_b);
    if (site_a == site_b) {
        throw InputError("two-site density matrix needs distinct sites");
    }
    const Mask bit_a = core::site_bit(site_a);
    const Mask bit_b = core::site_bit(site_b);
    const Mask cleared = ~(bit_a | bit_b);
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    state.for_each_amplitude([&](Mask mask, Complex amp) {
        const int a = ((mask & bit_a) ? 1 : 0) | ((mask & bit_b) ? 2 : 0);
        rho(a, a) += std::norm(amp);
        for (int b = a + 1; b < 4; ++b) {
            const Mask partner = (mask & cleared) | ((b & 1) ? bit_a : 0) | ((b & 2) ? bit_b : 0);
            const Complex other = state.amplitude(partner);
            if (other != Complex{}) {
                rho(a, b) += amp * std::conj(other);
            }
        }
    });
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            rho(b, a) = std::conj(rho(a, b));
        }
    }
    return rho;
}

/// Tr(rho O) with O = sigma_alpha.
inline Complex pauli_expectation(const Eigen::Matrix2cd& rho, Pauli alpha)
{
    return (rho * pauli_matrix(alpha)).trace();
}

/// Tr(rho sigma_alpha sigma_beta) on one site.
inline Complex pauli_pair_expectation(const Eigen::Matrix2cd& rho, Pauli alpha, Pauli beta)
{
    return (rho * pauli_matrix(alpha) * pauli_matrix(beta)).trace();
}

/// Tr(rho (sigma_alpha x sigma_beta)) for a two-site matrix from two_site_rdm.
inline Complex pauli_pair_expectation(const Eigen::Matrix4cd& rho, Pauli alpha, Pauli beta)
{
    const Eigen::Matrix2cd sa = pauli_matrix(alpha);
    const Eigen::Matrix2cd sb = pauli_matrix(beta);
    Complex total{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            // <b|O|a> with the first site in bit 0 of the local index
            total += rho(a, b) * sa(b & 1, a & 1) * sb(b >> 1, a >> 1);
        }
    }
    return total;
}

/// <psi| sigma_alpha(l) |psi>
inline Complex pauli_expectation(const PureState& state, Pauli alpha, int site)
{
    return pauli_expectation(one_site_rdm(state, site), alpha);
}

/// <psi| sigma_alpha(l) sigma_beta(l') |psi>
inline Complex pauli_pair_expectation(const PureState& state, Pauli alpha, int site_a, Pauli beta,
                                      int site_b)
{
    if (site_a == site_b) {
        return pauli_pair_expectation(one_site_rdm(state, site_a), alpha, beta);
    }
    return pauli_pair_expectation(two_site_rdm(state, site_a, site_b), alpha, beta);
}

} // namespace magnon::vcm
