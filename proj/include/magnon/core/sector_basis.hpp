#pragma once

#include "errors.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace magnon::core {

/// Spin configuration of a chain: bit (l-1) is set iff site l is up.
using Mask = std::uint64_t;

/// Largest chain length that fits a configuration mask.
inline constexpr int kMaxSites = 62;

namespace detail {

inline constexpr int kBinomialRows = 65;

using BinomialTable = std::array<std::array<std::uint64_t, kBinomialRows>, kBinomialRows>;

constexpr BinomialTable make_binomial_table()
{
    BinomialTable t{};
    for (int n = 0; n < kBinomialRows; ++n) {
        t[n][0] = 1;
        for (int k = 1; k <= n; ++k) {
            t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
        }
    }
    return t;
}

inline constexpr BinomialTable kBinomial = make_binomial_table();

} // namespace detail

/// Exact binomial coefficient for 0 <= n <= 64; zero outside 0 <= k <= n.
constexpr std::uint64_t binomial(int n, int k) noexcept
{
    if (n < 0 || k < 0 || k > n || n >= detail::kBinomialRows) {
        return 0;
    }
    return detail::kBinomial[n][k];
}

static_assert(binomial(4, 2) == 6);
static_assert(binomial(24, 12) == 2704156);
static_assert(binomial(60, 30) == 118264581564861424ULL);

inline void check_sites(int n_sites)
{
    if (n_sites < 1 || n_sites > kMaxSites) {
        throw InputError("site count " + std::to_string(n_sites) + " outside 1.." +
                         std::to_string(kMaxSites));
    }
}

/// Wavenumber k = 2*pi*j/N stored by its integer index j, -N/2 < j <= N/2.
class WavenumberIndex {
public:
    WavenumberIndex(int j, int n_sites) : j_(j), n_(n_sites)
    {
        check_sites(n_sites);
        if (2 * j <= -n_sites || 2 * j > n_sites) {
            throw BrillouinRangeError("wavenumber index j=" + std::to_string(j) +
                                      " outside the first Brillouin zone for N=" +
                                      std::to_string(n_sites));
        }
    }

    int index() const noexcept { return j_; }
    int sites() const noexcept { return n_; }
    double radians() const noexcept
    {
        return 2.0 * std::numbers::pi * static_cast<double>(j_) / static_cast<double>(n_);
    }

    friend bool operator==(const WavenumberIndex&, const WavenumberIndex&) = default;
    friend auto operator<=>(const WavenumberIndex&, const WavenumberIndex&) = default;

private:
    int j_;
    int n_;
};

/// Configurations of N sites with exactly m up-spins in colexicographic order,
/// which coincides with increasing mask value.
///
/// rank(mask) = sum_t C(p_t, t) over the set-bit positions p_1 < ... < p_m.
class SectorBasis {
public:
    SectorBasis(int n_sites, int magnons) : n_(n_sites), m_(magnons)
    {
        check_sites(n_sites);
        if (magnons < 0 || magnons > n_sites) {
            throw SectorRangeError("magnon number " + std::to_string(magnons) +
                                   " outside 0.." + std::to_string(n_sites));
        }
        dim_ = binomial(n_, m_);
    }

    int sites() const noexcept { return n_; }
    int magnons() const noexcept { return m_; }
    std::uint64_t dim() const noexcept { return dim_; }

    bool contains(Mask mask) const noexcept
    {
        return std::popcount(mask) == m_ && (n_ == 64 || (mask >> n_) == 0);
    }

    /// Index of `mask` within the sector. The mask must have popcount m.
    std::uint64_t rank(Mask mask) const noexcept { return SectorBasis::colex_rank(mask); }

    Mask unrank(std::uint64_t index) const noexcept
    {
        Mask mask = 0;
        int p = n_ - 1;
        for (int t = m_; t >= 1; --t) {
            while (binomial(p, t) > index) {
                --p;
            }
            index -= binomial(p, t);
            mask |= Mask{1} << p;
            --p;
        }
        return mask;
    }

    Mask first() const noexcept { return m_ == 0 ? Mask{0} : (Mask{1} << m_) - 1; }

    /// Next configuration in increasing order (Gosper's hack). Undefined past the last one.
    static Mask next(Mask mask) noexcept
    {
        const Mask lowest = mask & (~mask + 1);
        const Mask ripple = mask + lowest;
        return (((ripple ^ mask) >> 2) / lowest) | ripple;
    }

    std::vector<Mask> configurations() const
    {
        std::vector<Mask> out;
        out.reserve(dim_);
        Mask mask = first();
        for (std::uint64_t i = 0; i < dim_; ++i) {
            out.push_back(mask);
            if (i + 1 < dim_) {
                mask = next(mask);
            }
        }
        return out;
    }

    static std::uint64_t colex_rank(Mask mask) noexcept
    {
        std::uint64_t r = 0;
        int t = 1;
        while (mask != 0) {
            r += binomial(std::countr_zero(mask), t++);
            mask &= mask - 1;
        }
        return r;
    }

private:
    int n_;
    int m_;
    std::uint64_t dim_ = 0;
};

inline constexpr Mask site_bit(int site) noexcept { return Mask{1} << (site - 1); }

inline constexpr Mask full_mask(int n_sites) noexcept
{
    return n_sites >= 64 ? ~Mask{0} : (Mask{1} << n_sites) - 1;
}

} // namespace magnon::core
