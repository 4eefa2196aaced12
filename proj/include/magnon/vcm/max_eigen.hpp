#pragma once

#include "../core/errors.hpp"
#include "additive_operator.hpp"
#include "vcm_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace magnon::vcm {

/// Dense diagonalization is used up to this matrix dimension in automatic mode.
inline constexpr Eigen::Index kDenseEigenLimit = 3000;

enum class EigenMode { automatic, dense, iterative };

struct EigenOptions {
    EigenMode mode = EigenMode::automatic;
    double tolerance = 1e-10;           // relative residual for iterative eigenpairs
    double degeneracy_tolerance = 1e-8; // relative gap below which eigenvalues are merged
    int max_iterations = 2000;          // Krylov dimension cap per Lanczos run
};

struct MaxEigenResult {
    double value = 0.0;
    AdditiveOperator op;   // eigenvector scaled to sum |c|^2 = N
    int multiplicity = 1;  // size of the eigenvalue cluster at the top
};

namespace detail {

// Picks a canonical unit vector inside span(Q) (orthonormal columns):
// the normalized projection of the first coordinate axis with a nonzero
// projection. This maximizes the real part of the first nonzero component.
inline Eigen::VectorXcd canonical_vector(const Eigen::MatrixXcd& q)
{
    constexpr double kMinProjection = 1e-8;
    for (Eigen::Index j = 0; j < q.rows(); ++j) {
        const Eigen::VectorXcd coeffs = q.row(j).adjoint();
        const double length = coeffs.norm();
        if (length > kMinProjection) {
            Eigen::VectorXcd v = q * coeffs;
            return v / v.norm();
        }
    }
    return q.col(0);
}

inline MaxEigenResult finish(int n_sites, double value, const Eigen::MatrixXcd& cluster)
{
    const Eigen::VectorXcd v = canonical_vector(cluster);
    const double scale = std::sqrt(static_cast<double>(n_sites));
    return {value, AdditiveOperator(n_sites, v * scale), static_cast<int>(cluster.cols())};
}

inline MaxEigenResult dense_max_eigen(const VcmMatrix& vcm, const EigenOptions& options)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(vcm.matrix());
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("dense hermitian eigensolver failed");
    }
    const auto& values = solver.eigenvalues();
    const Eigen::Index top = values.size() - 1;
    const double e_max = values(top);
    const double gap = options.degeneracy_tolerance * std::max(1.0, std::abs(e_max));
    Eigen::Index first = top;
    while (first > 0 && e_max - values(first - 1) <= gap) {
        --first;
    }
    return finish(vcm.sites(), e_max, solver.eigenvectors().middleCols(first, top - first + 1));
}

struct RitzPair {
    double value = 0.0;
    Eigen::VectorXcd vector;
};

// Lanczos with full reorthogonalization for the largest eigenpair of V
// restricted to the orthogonal complement of `locked`.
inline RitzPair lanczos_top(const Eigen::MatrixXcd& v, const std::vector<Eigen::VectorXcd>& locked,
                            const EigenOptions& options)
{
    const Eigen::Index n = v.rows();
    auto project_out = [&](Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& basis) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                w -= b * b.dot(w);
            }
        }
    };

    // A fresh seed per deflation step: reusing one start vector would leave it
    // without weight in the rest of a degenerate eigenspace.
    std::mt19937_64 rng(0x5eed1234abcdULL + locked.size());
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd start(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        start(i) = Complex{gauss(rng), gauss(rng)};
    }
    project_out(start, locked);
    if (start.norm() == 0.0) {
        throw ConvergenceFailure("Lanczos start vector vanished after deflation");
    }
    start.normalize();

    const Eigen::Index free_dim = n - static_cast<Eigen::Index>(locked.size());
    const int krylov_cap = static_cast<int>(std::min<Eigen::Index>(options.max_iterations, free_dim));
    std::vector<Eigen::VectorXcd> basis{start};
    std::vector<double> alpha;
    std::vector<double> beta;

    for (int k = 0; k < krylov_cap; ++k) {
        Eigen::VectorXcd w = v * basis.back();
        alpha.push_back(basis.back().dot(w).real());
        project_out(w, locked);
        project_out(w, basis);
        const double b = w.norm();
        const bool last = k + 1 == krylov_cap;

        if (k < 50 || k % 10 == 0 || last) {
            const auto dim = static_cast<Eigen::Index>(alpha.size());
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                t(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < dim) {
                    t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
            const double theta = small.eigenvalues()(dim - 1);
            const Eigen::VectorXd y = small.eigenvectors().col(dim - 1);
            const double scale = std::max(std::abs(theta), 1e-300);
            const bool converged = b * std::abs(y(dim - 1)) <= options.tolerance * scale;
            const bool invariant = b <= 1e-14 * std::max(1.0, std::abs(theta));
            if (converged || invariant) {
                Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(n);
                for (Eigen::Index i = 0; i < dim; ++i) {
                    ritz += basis[static_cast<std::size_t>(i)] * y(i);
                }
                project_out(ritz, locked);
                ritz.normalize();
                return {theta, ritz};
            }
        }
        if (last || b == 0.0) {
            break;
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    throw ConvergenceFailure("Lanczos did not reach relative residual " +
                                   std::to_string(options.tolerance) + " within " +
                                   std::to_string(krylov_cap) + " iterations");
}

inline MaxEigenResult iterative_max_eigen(const VcmMatrix& vcm, const EigenOptions& options)
{
    const Eigen::MatrixXcd& v = vcm.matrix();
    std::vector<Eigen::VectorXcd> cluster;
    RitzPair top = lanczos_top(v, cluster, options);
    const double e_max = top.value;
    cluster.push_back(top.vector);
    // Deflate until the next eigenvalue separates from the top one.
    while (static_cast<Eigen::Index>(cluster.size()) < v.rows()) {
        RitzPair next = lanczos_top(v, cluster, options);
        if (e_max - next.value > options.degeneracy_tolerance * std::max(1.0, std::abs(e_max))) {
            break;
        }
        cluster.push_back(next.vector);
    }
    Eigen::MatrixXcd q(v.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        q.col(static_cast<Eigen::Index>(i)) = cluster[i];
    }
    // Re-orthonormalize the cluster basis before taking projections.
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(q);
    const Eigen::MatrixXcd orthonormal = qr.householderQ() * Eigen::MatrixXcd::Identity(q.rows(), q.cols());
    return finish(vcm.sites(), e_max, orthonormal);
}

} // namespace detail

/// Largest VCM eigenvalue with a canonical eigenvector scaled to sum |c|^2 = N.
/// A degenerate top eigenspace is resolved by detail::canonical_vector.
inline MaxEigenResult max_eigen(const VcmMatrix& vcm, const EigenOptions& options = {})
{
    const bool dense = options.mode == EigenMode::dense ||
                       (options.mode == EigenMode::automatic && vcm.dim() <= kDenseEigenLimit);
    return dense ? detail::dense_max_eigen(vcm, options) : detail::iterative_max_eigen(vcm, options);
}

} // namespace magnon::vcm
