#pragma once

#include "../core/errors.hpp"
#include "../core/pure_state.hpp"
#include "../core/sector_basis.hpp"
#include "correlations.hpp"
#include "vcm_matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace magnon::vcm {

/// Tolerance on sum |c|^2 = N required by additive_fluctuation.
inline constexpr double kNormalizationTolerance = 1e-6;

/// A = sum_l sum_alpha c_{alpha l} sigma_alpha(l), coefficients in VCM index order.
class AdditiveOperator {
public:
    explicit AdditiveOperator(int n_sites)
        : n_(n_sites), c_(Eigen::VectorXcd::Zero(3 * static_cast<Eigen::Index>(std::max(n_sites, 0))))
    {
        check_operator_sites(n_sites);
    }

    AdditiveOperator(int n_sites, Eigen::VectorXcd coefficients) : n_(n_sites), c_(std::move(coefficients))
    {
        check_operator_sites(n_sites);
        if (c_.size() != 3 * n_) {
            throw DimensionMismatch("additive operator needs 3N coefficients");
        }
    }

    /// sum_l sigma_alpha(l); already satisfies sum |c|^2 = N.
    static AdditiveOperator uniform(int n_sites, Pauli alpha)
    {
        AdditiveOperator op(n_sites);
        for (int l = 1; l <= n_sites; ++l) {
            op(alpha, l) = 1.0;
        }
        return op;
    }

    /// sum_l (-1)^l sigma_alpha(l)
    static AdditiveOperator staggered(int n_sites, Pauli alpha)
    {
        AdditiveOperator op(n_sites);
        for (int l = 1; l <= n_sites; ++l) {
            op(alpha, l) = (l % 2 == 0) ? 1.0 : -1.0;
        }
        return op;
    }

    /// sum_l sigma_+(l) = (1/2) sum_l (sigma_x + i sigma_y); sum |c|^2 = N/2.
    static AdditiveOperator raising(int n_sites)
    {
        AdditiveOperator op(n_sites);
        for (int l = 1; l <= n_sites; ++l) {
            op(Pauli::x, l) = 0.5;
            op(Pauli::y, l) = Complex{0.0, 0.5};
        }
        return op;
    }

    int sites() const noexcept { return n_; }
    const Eigen::VectorXcd& coefficients() const noexcept { return c_; }

    Complex& operator()(Pauli alpha, int site) { return c_(VcmMatrix::index(n_, alpha, site)); }
    Complex operator()(Pauli alpha, int site) const { return c_(VcmMatrix::index(n_, alpha, site)); }

    double norm_squared() const { return c_.squaredNorm(); }

    /// Copy rescaled so that sum |c|^2 = N.
    AdditiveOperator normalized() const
    {
        const double norm = std::sqrt(norm_squared());
        if (!(norm > 0.0)) {
            throw NormalizationViolation("cannot normalize the zero operator");
        }
        return AdditiveOperator(n_, c_ * (std::sqrt(static_cast<double>(n_)) / norm));
    }

    AdditiveOperator adjoint() const { return AdditiveOperator(n_, c_.conjugate()); }

    bool is_hermitian(double tolerance = 0.0) const
    {
        return c_.imag().cwiseAbs().maxCoeff() <= tolerance;
    }

private:
    // Operators are not tied to 64-bit basis masks, so only N >= 1 is required.
    static void check_operator_sites(int n_sites)
    {
        if (n_sites < 1) {
            throw InputError("operator needs at least one site");
        }
    }

    int n_;
    Eigen::VectorXcd c_;
};

/// A|psi>, unnormalized. Sector states map to sectors m-1, m, m+1.
inline PureState apply_additive(const PureState& state, const AdditiveOperator& op)
{
    const int n = state.sites();
    if (op.sites() != n) {
        throw DimensionMismatch("operator and state have different N");
    }
    const Complex i{0.0, 1.0};
    // Local action on a site whose bit is b: a flip with weight c_x + c_y * (b ? i : -i),
    // and a diagonal weight c_z * (b ? 1 : -1).
    auto visit = [&](Mask mask, Complex amp, auto&& emit) {
        for (int l = 1; l <= n; ++l) {
            const Mask bit = core::site_bit(l);
            const bool up = (mask & bit) != 0;
            const Complex flip = op(Pauli::x, l) + op(Pauli::y, l) * (up ? i : -i);
            const Complex diag = op(Pauli::z, l) * (up ? 1.0 : -1.0);
            if (flip != Complex{}) {
                emit(mask ^ bit, amp * flip);
            }
            if (diag != Complex{}) {
                emit(mask, amp * diag);
            }
        }
    };

    if (state.is_sector_structured()) {
        std::map<int, std::vector<Complex>> out;
        auto target = [&](int m) -> std::vector<Complex>& {
            auto it = out.find(m);
            if (it == out.end()) {
                it = out.emplace(m, std::vector<Complex>(core::binomial(n, m))).first;
            }
            return it->second;
        };
        for (const auto& b : state.blocks()) {
            for (int m : {b.magnons - 1, b.magnons, b.magnons + 1}) {
                if (m >= 0 && m <= n) {
                    target(m);
                }
            }
        }
        state.for_each_amplitude([&](Mask mask, Complex amp) {
            visit(mask, amp, [&](Mask to, Complex value) {
                out[std::popcount(to)][core::SectorBasis::colex_rank(to)] += value;
            });
        });
        std::vector<core::SectorBlock> blocks;
        for (auto& [m, amps] : out) {
            blocks.push_back({m, std::move(amps)});
        }
        return PureState::from_sectors(n, std::move(blocks));
    }

    std::vector<core::SparseEntry> entries;
    state.for_each_amplitude([&](Mask mask, Complex amp) {
        visit(mask, amp, [&](Mask to, Complex value) { entries.push_back({to, value}); });
    });
    return PureState::from_sparse(n, std::move(entries));
}

/// <dA^dagger dA> = ||A psi||^2 - |<A>|^2 by direct operator application, no normalization check.
inline double fluctuation(const PureState& state, const AdditiveOperator& op)
{
    const PureState image = apply_additive(state, op);
    const Complex mean = core::inner_product(state, image);
    return image.norm_squared() - std::norm(mean);
}

/// Fluctuation of an operator obeying sum |c|^2 = N.
inline double additive_fluctuation(const PureState& state, const AdditiveOperator& op)
{
    const double n = static_cast<double>(op.sites());
    if (std::abs(op.norm_squared() - n) > kNormalizationTolerance) {
        throw NormalizationViolation("sum |c|^2 = " + std::to_string(op.norm_squared()) +
                                           " differs from N = " + std::to_string(op.sites()));
    }
    return fluctuation(state, op);
}

/// c^dagger V c
inline double quadratic_form(const VcmMatrix& vcm, const AdditiveOperator& op)
{
    if (vcm.sites() != op.sites()) {
        throw DimensionMismatch("operator and VCM have different N");
    }
    return op.coefficients().dot(vcm.matrix() * op.coefficients()).real();
}

struct HermitianParts {
    AdditiveOperator real_part;      // (A + A^dagger)/2
    AdditiveOperator imaginary_part; // (A - A^dagger)/2i
};

/// A = A' + i A'' with A', A'' hermitian: coefficient-wise real and imaginary parts.
inline HermitianParts hermitian_parts(const AdditiveOperator& op)
{
    const Eigen::VectorXcd re = op.coefficients().real().cast<Complex>();
    const Eigen::VectorXcd im = op.coefficients().imag().cast<Complex>();
    return {AdditiveOperator(op.sites(), re), AdditiveOperator(op.sites(), im)};
}

} // namespace magnon::vcm
