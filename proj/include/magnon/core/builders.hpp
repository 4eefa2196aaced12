#pragma once

#include "errors.hpp"
#include "pure_state.hpp"
#include "sector_basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace magnon::core {

namespace detail {

// e^{i k l} for sites l = 1..N, indexed by l; the phase index j*l is reduced mod N exactly.
inline std::vector<Complex> site_phases(const WavenumberIndex& k)
{
    const int n = k.sites();
    std::vector<Complex> phases(static_cast<std::size_t>(n) + 1);
    for (int l = 1; l <= n; ++l) {
        int r = (k.index() * l) % n;
        if (r < 0) {
            r += n;
        }
        phases[static_cast<std::size_t>(l)] =
            r == 0 ? Complex{1.0, 0.0}
                   : std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
    }
    return phases;
}

// Raises one sector block by a magnon. Each output amplitude gathers its
// m+1 predecessors in ascending site order.
inline SectorBlock create_on_block(int n, const SectorBlock& in, const std::vector<Complex>& phases)
{
    const int m_out = in.magnons + 1;
    const SectorBasis out_basis(n, m_out);
    SectorBlock out{m_out, std::vector<Complex>(out_basis.dim())};
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    std::vector<int> pos(static_cast<std::size_t>(m_out));
    std::vector<std::uint64_t> suffix(static_cast<std::size_t>(m_out) + 1);
    Mask mask = out_basis.first();
    for (std::uint64_t r = 0; r < out_basis.dim(); ++r) {
        Mask bits = mask;
        for (int t = 0; t < m_out; ++t) {
            pos[static_cast<std::size_t>(t)] = std::countr_zero(bits);
            bits &= bits - 1;
        }
        // Removing the bit of ordinal q shifts every higher bit's ordinal down by one.
        suffix[static_cast<std::size_t>(m_out)] = 0;
        for (int t = m_out - 1; t >= 0; --t) {
            suffix[static_cast<std::size_t>(t)] =
                suffix[static_cast<std::size_t>(t) + 1] +
                (t + 1 < m_out ? binomial(pos[static_cast<std::size_t>(t) + 1], t + 1) : 0);
        }
        Complex sum{};
        std::uint64_t prefix = 0;
        for (int q = 0; q < m_out; ++q) {
            const std::uint64_t rank = prefix + suffix[static_cast<std::size_t>(q)];
            const int site = pos[static_cast<std::size_t>(q)] + 1;
            sum += in.amplitudes[rank] * phases[static_cast<std::size_t>(site)];
            prefix += binomial(pos[static_cast<std::size_t>(q)], q + 1);
        }
        out.amplitudes[r] = sum * scale;
        if (r + 1 < out_basis.dim()) {
            mask = SectorBasis::next(mask);
        }
    }
    return out;
}

inline void require_norm(const PureState& s, const char* what)
{
    if (!(std::sqrt(s.norm_squared()) >= kVanishingNorm)) {
        throw VanishingResult(std::string(what) + " produced a vanishing state");
    }
}

} // namespace detail

/// |down^N>, the ferromagnetic reference state.
inline PureState all_down_state(int n_sites)
{
    return PureState::from_sector(n_sites, 0, {Complex{1.0, 0.0}});
}

/// Applies the magnon creation operator (1/sqrt N) sum_l e^{ikl} sigma_+(l).
/// The result is not renormalized.
inline PureState magnon_create(const PureState& state, const WavenumberIndex& k)
{
    const int n = state.sites();
    if (k.sites() != n) {
        throw DimensionMismatch("wavenumber defined for N=" + std::to_string(k.sites()) +
                                " applied to a state with N=" + std::to_string(n));
    }
    const auto phases = detail::site_phases(k);

    if (state.is_sector_structured()) {
        std::vector<SectorBlock> out;
        for (const auto& b : state.blocks()) {
            if (b.magnons < n) {
                out.push_back(detail::create_on_block(n, b, phases));
            }
        }
        if (out.empty()) {
            throw VanishingResult("sigma_+ annihilates the fully polarized up state");
        }
        PureState result = state.representation() == PureState::Representation::sector
                               ? PureState::from_sector(n, out.front().magnons,
                                                        std::move(out.front().amplitudes))
                               : PureState::from_sectors(n, std::move(out));
        detail::require_norm(result, "magnon creation");
        return result;
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<SparseEntry> entries;
    state.for_each_amplitude([&](Mask mask, Complex amp) {
        for (int l = 1; l <= n; ++l) {
            if ((mask & site_bit(l)) == 0) {
                entries.push_back({mask | site_bit(l), amp * phases[static_cast<std::size_t>(l)] * scale});
            }
        }
    });
    PureState result = PureState::from_sparse(n, std::move(entries));
    detail::require_norm(result, "magnon creation");
    return result;
}

/// Normalized prod_i M^dagger_{k_i} |down^N>.
inline PureState m_magnon_state(int n_sites, std::span<const int> wavenumber_indices)
{
    std::vector<int> js(wavenumber_indices.begin(), wavenumber_indices.end());
    std::sort(js.begin(), js.end());
    if (static_cast<int>(js.size()) > n_sites) {
        throw SectorRangeError("cannot place " + std::to_string(js.size()) + " magnons on " +
                               std::to_string(n_sites) + " sites");
    }
    PureState state = all_down_state(n_sites);
    for (int j : js) {
        state = magnon_create(state, WavenumberIndex(j, n_sites));
    }
    return state.normalized();
}

inline PureState m_magnon_state(int n_sites, std::initializer_list<int> wavenumber_indices)
{
    return m_magnon_state(n_sites, std::span<const int>(wavenumber_indices.begin(), wavenumber_indices.size()));
}

/// Equal-amplitude superposition of all m-up configurations (all wavenumbers zero).
inline PureState dicke_state(int n_sites, int magnons)
{
    const SectorBasis basis(n_sites, magnons);
    const double amp = 1.0 / std::sqrt(static_cast<double>(basis.dim()));
    return PureState::from_sector(n_sites, magnons,
                                  std::vector<Complex>(basis.dim(), Complex{amp, 0.0}));
}

/// (e^{-i alpha} cos(theta/2)|up> + sin(theta/2)|down>)^N stored as a direct sum of sectors.
inline PureState product_state(int n_sites, double theta, double alpha)
{
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw InputError("polar angle must lie in [0, pi]");
    }
    check_sites(n_sites);
    const double up = std::cos(theta / 2.0);
    const double down = std::sin(theta / 2.0);
    std::vector<SectorBlock> blocks;
    for (int m = 0; m <= n_sites; ++m) {
        const double magnitude = std::pow(up, m) * std::pow(down, n_sites - m);
        if (magnitude <= kSparseDropTolerance) {
            continue;
        }
        const SectorBasis basis(n_sites, m);
        const Complex amp = std::polar(magnitude, -static_cast<double>(m) * alpha);
        blocks.push_back({m, std::vector<Complex>(basis.dim(), amp)});
    }
    return PureState::from_sectors(n_sites, std::move(blocks)).normalized();
}

/// (|down^N> + |up^N>)/sqrt 2.
inline PureState ghz_state(int n_sites)
{
    check_sites(n_sites);
    const double amp = 1.0 / std::numbers::sqrt2;
    return PureState::from_sparse(n_sites, {{0, {amp, 0.0}}, {full_mask(n_sites), {amp, 0.0}}});
}

/// One k=0 magnon on |down^N>.
inline PureState w_state(int n_sites) { return m_magnon_state(n_sites, {0}); }

/// Wavenumber indices filling the zone from the bottom: 0, +1, -1, +2, -2, ...
/// Indices outside -N/2 < j <= N/2 are skipped.
inline std::vector<int> band_wavenumbers(int n_sites, int magnons)
{
    check_sites(n_sites);
    if (magnons < 0 || magnons > n_sites) {
        throw SectorRangeError("band of " + std::to_string(magnons) + " magnons on " +
                               std::to_string(n_sites) + " sites");
    }
    std::vector<int> js;
    js.reserve(static_cast<std::size_t>(magnons));
    if (magnons > 0) {
        js.push_back(0);
    }
    for (int step = 1; static_cast<int>(js.size()) < magnons; ++step) {
        for (int j : {step, -step}) {
            if (static_cast<int>(js.size()) < magnons && 2 * j > -n_sites && 2 * j <= n_sites) {
                js.push_back(j);
            }
        }
    }
    return js;
}

/// Band of `magnons` distinct wavenumbers followed by `extras`.
inline PureState band_state(int n_sites, int magnons, std::span<const int> extras = {})
{
    auto js = band_wavenumbers(n_sites, magnons);
    js.insert(js.end(), extras.begin(), extras.end());
    return m_magnon_state(n_sites, js);
}

/// Number of qubits of the second register: ceil(log2 M).
inline int modexp_register_bits(std::uint64_t modulus)
{
    return static_cast<int>(std::bit_width(modulus - 1));
}

/// 2^{-N1/2} sum_a |a>_1 |x^a mod M>_2. Register 1 holds sites 1..N1 with a in
/// binary, least significant bit on site 1; register 2 follows it.
inline PureState modexp_state(int first_register_bits, std::uint64_t base, std::uint64_t modulus)
{
    if (modulus < 3) {
        throw InvalidModulus("modulus must be at least 3");
    }
    if (std::gcd(base, modulus) != 1) {
        throw InvalidModulus("gcd(" + std::to_string(base) + ", " + std::to_string(modulus) +
                             ") != 1");
    }
    if (first_register_bits < 1) {
        throw InputError("first register needs at least one qubit");
    }
    const int second = modexp_register_bits(modulus);
    const int n = first_register_bits + second;
    check_sites(n);
    if (first_register_bits > 30) {
        throw InputError("first register too large to enumerate");
    }
    const std::uint64_t count = std::uint64_t{1} << first_register_bits;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    std::vector<SparseEntry> entries;
    entries.reserve(count);
    std::uint64_t power = 1 % modulus;
    const std::uint64_t b = base % modulus;
    for (std::uint64_t a = 0; a < count; ++a) {
        entries.push_back({a | (power << first_register_bits), {amp, 0.0}});
        power = static_cast<std::uint64_t>((static_cast<unsigned __int128>(power) * b) % modulus);
    }
    return PureState::from_sparse(n, std::move(entries));
}

/// One-magnon excitation energy 8 J sin^2(k/2).
inline double magnon_energy(const WavenumberIndex& k, double coupling)
{
    if (!(coupling > 0.0)) {
        throw InputError("exchange coupling J must be positive");
    }
    const double s = std::sin(k.radians() / 2.0);
    return 8.0 * coupling * s * s;
}

} // namespace magnon::core
