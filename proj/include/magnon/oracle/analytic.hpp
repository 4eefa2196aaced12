#pragma once

#include "../core/errors.hpp"
#include "../core/sector_basis.hpp"
#include "../vcm/additive_operator.hpp"
#include "../vcm/vcm_matrix.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

namespace magnon::oracle {

using core::Complex;
using vcm::Pauli;

inline void check_dicke_args(int n_sites, int magnons)
{
    if (n_sites < 2) {
        throw InputError("closed forms need N >= 2");
    }
    if (magnons < 0 || magnons > n_sites) {
        throw SectorRangeError("magnon number " + std::to_string(magnons) + " outside 0.." +
                               std::to_string(n_sites));
    }
}

/// Correlation parameters of the Dicke state with m up-spins out of N.
struct DickeVcmParams {
    double w1 = 0.0; // <sigma_x(l) sigma_x(l')>, l != l'
    double w2 = 0.0; // <sigma_z(l) sigma_z(l')>, l != l'
    double w3 = 0.0; // -<sigma_z(l)>
};

inline DickeVcmParams dicke_params(int n_sites, int magnons)
{
    check_dicke_args(n_sites, magnons);
    const double n = n_sites;
    const double m = magnons;
    const double pairs = n * (n - 1.0);
    return {2.0 * m * (n - m) / pairs, (n * n - 4.0 * m * n - n + 4.0 * m * m) / pairs, (n - 2.0 * m) / n};
}

/// Closed-form VCM of the Dicke state.
inline vcm::VcmMatrix dicke_vcm_entries(int n_sites, int magnons)
{
    const DickeVcmParams w = dicke_params(n_sites, magnons);
    const int n = n_sites;
    const Complex i{0.0, 1.0};
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    auto at = [&](Pauli a, int l, Pauli b, int lp) -> Complex& {
        return v(vcm::VcmMatrix::index(n, a, l), vcm::VcmMatrix::index(n, b, lp));
    };
    for (int l = 1; l <= n; ++l) {
        for (int lp = 1; lp <= n; ++lp) {
            if (l == lp) {
                at(Pauli::x, l, Pauli::x, l) = 1.0;
                at(Pauli::y, l, Pauli::y, l) = 1.0;
                at(Pauli::z, l, Pauli::z, l) = 1.0 - w.w3 * w.w3;
                at(Pauli::x, l, Pauli::y, l) = -i * w.w3;
                at(Pauli::y, l, Pauli::x, l) = i * w.w3;
            } else {
                at(Pauli::x, l, Pauli::x, lp) = w.w1;
                at(Pauli::y, l, Pauli::y, lp) = w.w1;
                at(Pauli::z, l, Pauli::z, lp) = w.w2 - w.w3 * w.w3;
            }
        }
    }
    return vcm::VcmMatrix(n, std::move(v));
}

struct Eigenpair {
    double value = 0.0;
    int multiplicity = 0;
};

/// e1..e6 with multiplicities N-1, 1, 1, 1, N-1, N-1.
struct DickeSpectrum {
    std::array<Eigenpair, 6> levels;

    double max() const
    {
        double best = levels[0].value;
        for (const auto& e : levels) {
            best = std::max(best, e.value);
        }
        return best;
    }

    int total_multiplicity() const
    {
        int total = 0;
        for (const auto& e : levels) {
            total += e.multiplicity;
        }
        return total;
    }

    double weighted_sum() const
    {
        double total = 0.0;
        for (const auto& e : levels) {
            total += e.value * e.multiplicity;
        }
        return total;
    }
};

inline DickeSpectrum dicke_spectrum(int n_sites, int magnons)
{
    const DickeVcmParams w = dicke_params(n_sites, magnons);
    const double nm1 = n_sites - 1.0;
    const int deg = n_sites - 1;
    DickeSpectrum s;
    s.levels = {{{1.0 - w.w2, deg},
                 {0.0, 1},
                 {1.0 + w.w3 + nm1 * w.w1, 1},
                 {1.0 - w.w3 + nm1 * w.w1, 1},
                 {1.0 + w.w3 - w.w1, deg},
                 {1.0 - w.w3 - w.w1, deg}}};
    return s;
}

/// 1 + (2mN - 2m^2 + N - 2m)/N, the level e_3. It is the largest Dicke VCM
/// eigenvalue for m <= N/2 and is evaluated as written for larger m.
inline double dicke_emax(int n_sites, int magnons)
{
    check_dicke_args(n_sites, magnons);
    const double n = n_sites;
    const double m = magnons;
    return 1.0 + (2.0 * m * n - 2.0 * m * m + n - 2.0 * m) / n;
}

/// Weight of sector m in the product state at polar angle theta.
inline double binomial_weight(int n_sites, int magnons, double theta)
{
    check_dicke_args(std::max(n_sites, 2), magnons);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return static_cast<double>(core::binomial(n_sites, magnons)) * std::pow(c * c, magnons) *
           std::pow(s * s, n_sites - magnons);
}

/// sum_l sigma_+(l) scaled to sum |c|^2 = N: coefficients 1 on x, i on y, 0 on z, divided by sqrt 2.
/// Eigenvector of the Dicke VCM for the largest eigenvalue.
inline vcm::AdditiveOperator dicke_top_operator(int n_sites)
{
    return vcm::AdditiveOperator::raising(n_sites).normalized();
}

/// Hypergeometric probabilities C(N/2, a) C(N/2, m-a) / C(N, m) for a = 0..m.
inline std::vector<double> hypergeometric_weights(int n_sites, int magnons)
{
    check_dicke_args(n_sites, magnons);
    if (n_sites % 2 != 0) {
        throw OddSizeError("half-chain weights need even N");
    }
    const int half = n_sites / 2;
    const double total = static_cast<double>(core::binomial(n_sites, magnons));
    std::vector<double> w;
    for (int a = 0; a <= magnons; ++a) {
        w.push_back(static_cast<double>(core::binomial(half, a)) *
                    static_cast<double>(core::binomial(half, magnons - a)) / total);
    }
    return w;
}

} // namespace magnon::oracle
