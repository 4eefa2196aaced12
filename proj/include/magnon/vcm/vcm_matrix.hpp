#pragma once

#include "../core/parallel.hpp"
#include "correlations.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <utility>
#include <vector>

namespace magnon::vcm {

/// Variance-covariance matrix V_{alpha l, beta l'} = <d sigma_alpha(l) d sigma_beta(l')>.
///
/// Rows and columns run (x,1)..(x,N), (y,1)..(y,N), (z,1)..(z,N).
class VcmMatrix {
public:
    VcmMatrix(int n_sites, Eigen::MatrixXcd entries) : n_(n_sites), v_(std::move(entries))
    {
        if (v_.rows() != 3 * n_ || v_.cols() != 3 * n_) {
            throw DimensionMismatch("VCM must be 3N x 3N");
        }
    }

    static constexpr Eigen::Index index(int n_sites, Pauli alpha, int site) noexcept
    {
        return static_cast<Eigen::Index>(static_cast<int>(alpha) * n_sites + (site - 1));
    }

    int sites() const noexcept { return n_; }
    Eigen::Index dim() const noexcept { return v_.rows(); }
    const Eigen::MatrixXcd& matrix() const noexcept { return v_; }

    Complex operator()(Pauli alpha, int site_a, Pauli beta, int site_b) const
    {
        return v_(index(n_, alpha, site_a), index(n_, beta, site_b));
    }

    /// Largest |V - V^dagger| entry.
    double hermiticity_defect() const { return (v_ - v_.adjoint()).cwiseAbs().maxCoeff(); }

    double trace() const { return v_.trace().real(); }

    /// Ascending eigenvalues via dense hermitian diagonalization (3N <= 3000).
    Eigen::VectorXd spectrum() const
    {
        if (v_.rows() > 3000) {
            throw CapExceeded("fluctuation-index", "full spectrum limited to 3N <= 3000");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(v_, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw ConvergenceFailure("dense hermitian eigensolver failed");
        }
        return solver.eigenvalues();
    }

private:
    int n_;
    Eigen::MatrixXcd v_;
};

struct VcmOptions {
    unsigned threads = core::default_thread_count();
};

/// Builds the VCM from one pass per site pair. Each pair's nine correlations
/// come from its two-site density matrix; the lower triangle is the conjugate
/// of the upper one.
inline VcmMatrix build_vcm(const PureState& state, const VcmOptions& options = {})
{
    const int n = state.sites();
    Eigen::MatrixXcd v(3 * n, 3 * n);

    std::vector<Eigen::Matrix2cd> single(static_cast<std::size_t>(n));
    core::parallel_for(static_cast<std::size_t>(n), options.threads,
                       [&](std::size_t i) { single[i] = one_site_rdm(state, static_cast<int>(i) + 1); });

    std::array<std::vector<Complex>, 3> mean;
    for (Pauli a : kPaulis) {
        auto& column = mean[static_cast<std::size_t>(a)];
        column.resize(static_cast<std::size_t>(n));
        for (int l = 1; l <= n; ++l) {
            column[static_cast<std::size_t>(l - 1)] = pauli_expectation(single[static_cast<std::size_t>(l - 1)], a);
        }
    }
    auto mu = [&](Pauli a, int l) { return mean[static_cast<std::size_t>(a)][static_cast<std::size_t>(l - 1)]; };

    for (int l = 1; l <= n; ++l) {
        const auto& rho = single[static_cast<std::size_t>(l - 1)];
        for (Pauli a : kPaulis) {
            const auto row = VcmMatrix::index(n, a, l);
            v(row, row) = (pauli_pair_expectation(rho, a, a) - mu(a, l) * mu(a, l)).real();
            for (Pauli b : kPaulis) {
                if (static_cast<int>(b) <= static_cast<int>(a)) {
                    continue;
                }
                const auto col = VcmMatrix::index(n, b, l);
                v(row, col) = pauli_pair_expectation(rho, a, b) - mu(a, l) * mu(b, l);
                v(col, row) = std::conj(v(row, col));
            }
        }
    }

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (int l = 1; l <= n; ++l) {
        for (int lp = l + 1; lp <= n; ++lp) {
            pairs.emplace_back(l, lp);
        }
    }
    core::parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
        const auto [l, lp] = pairs[p];
        const Eigen::Matrix4cd rho = two_site_rdm(state, l, lp);
        for (Pauli a : kPaulis) {
            for (Pauli b : kPaulis) {
                const Complex c = pauli_pair_expectation(rho, a, b) - mu(a, l) * mu(b, lp);
                v(VcmMatrix::index(n, a, l), VcmMatrix::index(n, b, lp)) = c;
                v(VcmMatrix::index(n, b, lp), VcmMatrix::index(n, a, l)) = std::conj(c);
            }
        }
    });
    return VcmMatrix(n, std::move(v));
}

} // namespace magnon::vcm
