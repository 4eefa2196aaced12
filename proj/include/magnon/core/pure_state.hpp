#pragma once

#include "errors.hpp"
#include "sector_basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace magnon::core {

using Complex = std::complex<double>;

/// Sparse amplitudes whose magnitude is at or below this are dropped.
inline constexpr double kSparseDropTolerance = 1e-15;

/// States whose norm falls below this are treated as annihilated.
inline constexpr double kVanishingNorm = 1e-12;

/// Dense amplitudes over one magnon-number sector, indexed by SectorBasis rank.
struct SectorBlock {
    int magnons = 0;
    std::vector<Complex> amplitudes;
};

struct SparseEntry {
    Mask mask = 0;
    Complex amplitude;
};

/// Pure state of an N-site spin-1/2 chain.
///
/// Three storage forms: a single magnon-number sector, a direct sum of
/// sectors, or a sparse list of basis kets. Builders return unit-norm states;
/// magnon_create and operator application return unnormalized ones.
class PureState {
public:
    enum class Representation { sector, multi_sector, sparse };

    static PureState from_sector(int n_sites, int magnons, std::vector<Complex> amplitudes)
    {
        PureState s(n_sites, Representation::sector);
        const SectorBasis basis(n_sites, magnons);
        if (amplitudes.size() != basis.dim()) {
            throw DimensionMismatch("sector block length " + std::to_string(amplitudes.size()) +
                                    " differs from C(N,m)=" + std::to_string(basis.dim()));
        }
        s.blocks_.push_back({magnons, std::move(amplitudes)});
        s.index_blocks();
        return s;
    }

    /// Blocks may arrive in any order; they are stored by increasing magnon number.
    static PureState from_sectors(int n_sites, std::vector<SectorBlock> blocks)
    {
        PureState s(n_sites, Representation::multi_sector);
        std::sort(blocks.begin(), blocks.end(),
                  [](const SectorBlock& a, const SectorBlock& b) { return a.magnons < b.magnons; });
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const SectorBasis basis(n_sites, blocks[i].magnons);
            if (blocks[i].amplitudes.size() != basis.dim()) {
                throw DimensionMismatch("sector block length mismatch for m=" +
                                        std::to_string(blocks[i].magnons));
            }
            if (i > 0 && blocks[i].magnons == blocks[i - 1].magnons) {
                throw InputError("duplicate sector block m=" + std::to_string(blocks[i].magnons));
            }
        }
        s.blocks_ = std::move(blocks);
        s.index_blocks();
        return s;
    }

    /// Entries are sorted by mask; duplicate masks are summed; tiny amplitudes dropped.
    static PureState from_sparse(int n_sites, std::vector<SparseEntry> entries)
    {
        PureState s(n_sites, Representation::sparse);
        const Mask outside = ~full_mask(n_sites);
        std::stable_sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
            return a.mask < b.mask;
        });
        for (const auto& e : entries) {
            if ((e.mask & outside) != 0) {
                throw InputError("basis ket has bits beyond site N=" + std::to_string(n_sites));
            }
            if (!s.sparse_.empty() && s.sparse_.back().mask == e.mask) {
                s.sparse_.back().amplitude += e.amplitude;
            } else {
                s.sparse_.push_back(e);
            }
        }
        std::erase_if(s.sparse_, [](const SparseEntry& e) {
            return std::abs(e.amplitude) <= kSparseDropTolerance;
        });
        return s;
    }

    int sites() const noexcept { return n_; }
    Representation representation() const noexcept { return rep_; }
    bool is_sector_structured() const noexcept { return rep_ != Representation::sparse; }

    std::span<const SectorBlock> blocks() const noexcept { return blocks_; }
    std::span<const SparseEntry> sparse_entries() const noexcept { return sparse_; }

    /// Block holding magnon number m, or nullptr.
    const SectorBlock* block(int magnons) const noexcept
    {
        if (magnons < 0 || magnons > n_ || block_of_m_.empty()) {
            return nullptr;
        }
        const int i = block_of_m_[static_cast<std::size_t>(magnons)];
        return i < 0 ? nullptr : &blocks_[static_cast<std::size_t>(i)];
    }

    Complex amplitude(Mask mask) const noexcept
    {
        if (rep_ == Representation::sparse) {
            auto it = std::lower_bound(sparse_.begin(), sparse_.end(), mask,
                                       [](const SparseEntry& e, Mask m) { return e.mask < m; });
            return (it != sparse_.end() && it->mask == mask) ? it->amplitude : Complex{};
        }
        if ((mask & ~full_mask(n_)) != 0) {
            return {};
        }
        const SectorBlock* b = block(std::popcount(mask));
        return b == nullptr ? Complex{} : b->amplitudes[SectorBasis::colex_rank(mask)];
    }

    /// Visits every stored amplitude: blocks by increasing m, each in rank order;
    /// sparse entries by increasing mask.
    template <class F>
    void for_each_amplitude(F&& f) const
    {
        if (rep_ == Representation::sparse) {
            for (const auto& e : sparse_) {
                f(e.mask, e.amplitude);
            }
            return;
        }
        for (const auto& b : blocks_) {
            Mask mask = SectorBasis(n_, b.magnons).first();
            for (std::size_t i = 0; i < b.amplitudes.size(); ++i) {
                f(mask, b.amplitudes[i]);
                if (i + 1 < b.amplitudes.size()) {
                    mask = SectorBasis::next(mask);
                }
            }
        }
    }

    std::size_t stored_amplitudes() const noexcept
    {
        if (rep_ == Representation::sparse) {
            return sparse_.size();
        }
        std::size_t total = 0;
        for (const auto& b : blocks_) {
            total += b.amplitudes.size();
        }
        return total;
    }

    double norm_squared() const noexcept
    {
        double total = 0.0;
        for_each_amplitude([&](Mask, Complex a) { total += std::norm(a); });
        return total;
    }

    /// Unit-norm copy. Throws VanishingResult when the norm is below kVanishingNorm.
    PureState normalized() const
    {
        const double norm = std::sqrt(norm_squared());
        if (!(norm >= kVanishingNorm)) {
            throw VanishingResult("state norm " + std::to_string(norm) + " vanishes");
        }
        return scaled(Complex{1.0 / norm, 0.0});
    }

    PureState scaled(Complex factor) const
    {
        PureState out = *this;
        out.scale(factor);
        return out;
    }

private:
    PureState(int n_sites, Representation rep) : n_(n_sites), rep_(rep) { check_sites(n_sites); }

    void scale(Complex factor) noexcept
    {
        for (auto& b : blocks_) {
            for (auto& a : b.amplitudes) {
                a *= factor;
            }
        }
        for (auto& e : sparse_) {
            e.amplitude *= factor;
        }
    }

    void index_blocks()
    {
        block_of_m_.assign(static_cast<std::size_t>(n_) + 1, -1);
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            block_of_m_[static_cast<std::size_t>(blocks_[i].magnons)] = static_cast<int>(i);
        }
    }

    int n_;
    Representation rep_;
    std::vector<SectorBlock> blocks_;
    std::vector<int> block_of_m_;
    std::vector<SparseEntry> sparse_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner_product(const PureState& a, const PureState& b)
{
    if (a.sites() != b.sites()) {
        throw DimensionMismatch("inner product of states with N=" + std::to_string(a.sites()) +
                                " and N=" + std::to_string(b.sites()));
    }
    Complex total{};
    if (a.is_sector_structured() && b.is_sector_structured()) {
        for (const auto& block_a : a.blocks()) {
            const SectorBlock* block_b = b.block(block_a.magnons);
            if (block_b == nullptr) {
                continue;
            }
            for (std::size_t i = 0; i < block_a.amplitudes.size(); ++i) {
                total += std::conj(block_a.amplitudes[i]) * block_b->amplitudes[i];
            }
        }
        return total;
    }
    a.for_each_amplitude([&](Mask mask, Complex amp) { total += std::conj(amp) * b.amplitude(mask); });
    return total;
}

} // namespace magnon::core
