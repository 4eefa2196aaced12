#pragma once

#include "../core/errors.hpp"
#include "../core/parallel.hpp"
#include "../core/pure_state.hpp"
#include "../core/sector_basis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

namespace magnon::entanglement {

using core::Complex;
using core::Mask;
using core::PureState;

/// Schmidt coefficients at or below this count as zero.
inline constexpr double kSchmidtRankThreshold = 1e-12;
/// Allowed |trace - 1| before entropy evaluation refuses the input.
inline constexpr double kTraceTolerance = 1e-8;

enum class LogBase { bits, nats };
enum class Side { a, b };

/// Subsystem A = sites 1..k, subsystem B = sites k+1..N.
class BipartiteCut {
public:
    /// Contiguous halves; N must be even.
    static BipartiteCut half(int n_sites)
    {
        if (n_sites % 2 != 0) {
            throw OddSizeError("half-chain cut needs even N, got " + std::to_string(n_sites));
        }
        return BipartiteCut(n_sites, n_sites / 2);
    }

    static BipartiteCut prefix(int n_sites, int a_sites)
    {
        if (a_sites < 1 || a_sites >= n_sites) {
            throw InputError("subsystem A must hold 1..N-1 sites");
        }
        return BipartiteCut(n_sites, a_sites);
    }

    int sites() const noexcept { return n_; }
    int a_sites() const noexcept { return k_; }
    int b_sites() const noexcept { return n_ - k_; }
    Mask a_part(Mask mask) const noexcept { return mask & core::full_mask(k_); }
    Mask b_part(Mask mask) const noexcept { return mask >> k_; }
    Mask join(Mask a, Mask b) const noexcept { return a | (b << k_); }

private:
    BipartiteCut(int n, int k) : n_(n), k_(k) { core::check_sites(n); }
    int n_;
    int k_;
};

/// Amplitude matrix psi(r, c) for one group of row magnon numbers. Rows and
/// columns list only configurations present in the state; rows are sorted by
/// (magnon number, mask), columns by mask.
struct CoefficientBlock {
    std::vector<int> labels;
    std::vector<Mask> rows;
    std::vector<Mask> cols;
    Eigen::MatrixXcd psi;
};

namespace detail {

inline int find_root(std::vector<int>& parent, int i)
{
    while (parent[static_cast<std::size_t>(i)] != i) {
        parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        i = parent[static_cast<std::size_t>(i)];
    }
    return i;
}

// Splits the state into coefficient blocks for the chosen side. Row magnon
// numbers that share a column configuration are merged into one block, which
// keeps cross-sector coherences of multi-sector states.
inline std::vector<CoefficientBlock> coefficient_blocks(const PureState& state, const BipartiteCut& cut, Side side)
{
    if (state.sites() != cut.sites()) {
        throw DimensionMismatch("cut and state have different N");
    }
    struct Entry {
        Mask row;
        Mask col;
        Complex amp;
    };
    std::vector<Entry> entries;
    entries.reserve(state.stored_amplitudes());
    state.for_each_amplitude([&](Mask mask, Complex amp) {
        const Mask a = cut.a_part(mask);
        const Mask b = cut.b_part(mask);
        entries.push_back(side == Side::a ? Entry{a, b, amp} : Entry{b, a, amp});
    });

    const int row_sites = side == Side::a ? cut.a_sites() : cut.b_sites();
    std::vector<int> parent(static_cast<std::size_t>(row_sites) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> used(parent.size(), false);
    std::unordered_map<Mask, int> first_label;
    for (const auto& e : entries) {
        const int label = std::popcount(e.row);
        used[static_cast<std::size_t>(label)] = true;
        auto [it, inserted] = first_label.try_emplace(e.col, label);
        if (!inserted) {
            const int x = find_root(parent, it->second);
            const int y = find_root(parent, label);
            parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
        }
    }

    std::vector<int> group_of_label(parent.size(), -1);
    std::vector<CoefficientBlock> blocks;
    for (int label = 0; label <= row_sites; ++label) {
        if (!used[static_cast<std::size_t>(label)]) {
            continue;
        }
        const int root = find_root(parent, label);
        if (group_of_label[static_cast<std::size_t>(root)] < 0) {
            group_of_label[static_cast<std::size_t>(root)] = static_cast<int>(blocks.size());
            blocks.emplace_back();
        }
        const int g = group_of_label[static_cast<std::size_t>(root)];
        group_of_label[static_cast<std::size_t>(label)] = g;
        blocks[static_cast<std::size_t>(g)].labels.push_back(label);
    }

    for (const auto& e : entries) {
        auto& b = blocks[static_cast<std::size_t>(group_of_label[static_cast<std::size_t>(std::popcount(e.row))])];
        b.rows.push_back(e.row);
        b.cols.push_back(e.col);
    }
    auto by_weight = [](Mask x, Mask y) {
        const int px = std::popcount(x);
        const int py = std::popcount(y);
        return px != py ? px < py : x < y;
    };
    for (auto& b : blocks) {
        std::sort(b.rows.begin(), b.rows.end(), by_weight);
        b.rows.erase(std::unique(b.rows.begin(), b.rows.end()), b.rows.end());
        std::sort(b.cols.begin(), b.cols.end());
        b.cols.erase(std::unique(b.cols.begin(), b.cols.end()), b.cols.end());
        b.psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b.rows.size()),
                                       static_cast<Eigen::Index>(b.cols.size()));
    }
    for (const auto& e : entries) {
        auto& b = blocks[static_cast<std::size_t>(group_of_label[static_cast<std::size_t>(std::popcount(e.row))])];
        const auto r = std::lower_bound(b.rows.begin(), b.rows.end(), e.row, by_weight) - b.rows.begin();
        const auto c = std::lower_bound(b.cols.begin(), b.cols.end(), e.col) - b.cols.begin();
        b.psi(r, c) += e.amp;
    }
    return blocks;
}

} // namespace detail

/// Reduced density operator as a direct sum of hermitian blocks.
class ReducedDensity {
public:
    struct Block {
        std::vector<int> labels;  // subsystem magnon numbers in this block
        std::vector<Mask> configs;
        Eigen::MatrixXcd rho;
    };

    ReducedDensity(int subsystem_sites, std::vector<Block> blocks)
        : sites_(subsystem_sites), blocks_(std::move(blocks)) {}

    int subsystem_sites() const noexcept { return sites_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }

    double trace() const
    {
        double t = 0.0;
        for (const auto& b : blocks_) {
            t += b.rho.trace().real();
        }
        return t;
    }

    /// All eigenvalues, ascending.
    std::vector<double> eigenvalues() const
    {
        std::vector<double> out;
        for (const auto& b : blocks_) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(b.rho, Eigen::EigenvaluesOnly);
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
                out.push_back(solver.eigenvalues()(i));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Dense 2^k x 2^k matrix indexed by subsystem mask. Limited to k <= 14.
    Eigen::MatrixXcd to_dense() const
    {
        if (sites_ > 14) {
            throw CapExceeded("bipartite-entropy", "dense reduced density limited to 14 sites");
        }
        const Eigen::Index dim = Eigen::Index{1} << sites_;
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto& b : blocks_) {
            for (std::size_t i = 0; i < b.configs.size(); ++i) {
                for (std::size_t j = 0; j < b.configs.size(); ++j) {
                    out(static_cast<Eigen::Index>(b.configs[i]), static_cast<Eigen::Index>(b.configs[j])) =
                        b.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
        return out;
    }

private:
    int sites_;
    std::vector<Block> blocks_;
};

/// rho_A (or rho_B) assembled block by block from the amplitude matrices.
inline ReducedDensity reduced_density(const PureState& state, const BipartiteCut& cut, Side side = Side::a)
{
    auto coeffs = detail::coefficient_blocks(state, cut, side);
    std::vector<ReducedDensity::Block> blocks(coeffs.size());
    core::parallel_for(coeffs.size(), core::default_thread_count(), [&](std::size_t i) {
        auto& c = coeffs[i];
        blocks[i].labels = c.labels;
        blocks[i].configs = std::move(c.rows);
        blocks[i].rho = c.psi * c.psi.adjoint();
    });
    return ReducedDensity(side == Side::a ? cut.a_sites() : cut.b_sites(), std::move(blocks));
}

inline double log_factor(LogBase base) noexcept { return base == LogBase::bits ? 1.0 / std::log(2.0) : 1.0; }

/// -sum p log p over a probability list; 0 log 0 = 0, tiny negative round-off clamped.
inline double shannon_entropy(const std::vector<double>& probabilities, LogBase base = LogBase::bits)
{
    double total = 0.0;
    for (double p : probabilities) {
        total += p;
    }
    if (std::abs(total - 1.0) > kTraceTolerance) {
        throw TraceDeviation("probabilities sum to " + std::to_string(total));
    }
    double s = 0.0;
    for (double p : probabilities) {
        if (p > 0.0) {
            s -= p * std::log(p);
        }
    }
    return std::max(0.0, s * log_factor(base));
}

inline double von_neumann_entropy(const ReducedDensity& rho, LogBase base = LogBase::bits)
{
    return shannon_entropy(rho.eigenvalues(), base);
}

struct SchmidtCoefficient {
    double value = 0.0;
    int label = 0; // smallest subsystem-A magnon number of the owning block
};

/// Schmidt coefficients, descending within each block, blocks in label order.
class SchmidtSpectrum {
public:
    SchmidtSpectrum() = default;
    explicit SchmidtSpectrum(std::vector<SchmidtCoefficient> c) : coefficients_(std::move(c)) {}

    const std::vector<SchmidtCoefficient>& coefficients() const noexcept { return coefficients_; }

    int rank() const noexcept
    {
        return static_cast<int>(std::count_if(coefficients_.begin(), coefficients_.end(),
                                              [](const auto& c) { return c.value > kSchmidtRankThreshold; }));
    }

    double weight() const noexcept
    {
        double total = 0.0;
        for (const auto& c : coefficients_) {
            total += c.value * c.value;
        }
        return total;
    }

    std::vector<double> probabilities() const
    {
        std::vector<double> p;
        p.reserve(coefficients_.size());
        for (const auto& c : coefficients_) {
            p.push_back(c.value * c.value);
        }
        return p;
    }

    double entropy(LogBase base = LogBase::bits) const { return shannon_entropy(probabilities(), base); }

private:
    std::vector<SchmidtCoefficient> coefficients_;
};

inline double von_neumann_entropy(const SchmidtSpectrum& s, LogBase base = LogBase::bits) { return s.entropy(base); }

/// State = sum_i lambda_i |u_i>_A |v_i>_B over lambda_i > kSchmidtRankThreshold, computed blockwise with an SVD.
class SchmidtDecomposition {
public:
    struct Term {
        double lambda = 0.0;
        int label = 0;
        std::vector<Mask> a_configs;
        Eigen::VectorXcd u;
        std::vector<Mask> b_configs;
        Eigen::VectorXcd v;
    };

    SchmidtDecomposition(BipartiteCut cut, std::vector<Term> terms) : cut_(cut), terms_(std::move(terms)) {}

    const BipartiteCut& cut() const noexcept { return cut_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    SchmidtSpectrum spectrum() const
    {
        std::vector<SchmidtCoefficient> c;
        c.reserve(terms_.size());
        for (const auto& t : terms_) {
            c.push_back({t.lambda, t.label});
        }
        return SchmidtSpectrum(std::move(c));
    }

    /// sum_i lambda_i u_i (x) v_i as a sparse state.
    PureState reconstruct() const
    {
        std::vector<core::SparseEntry> entries;
        for (const auto& t : terms_) {
            for (std::size_t i = 0; i < t.a_configs.size(); ++i) {
                for (std::size_t j = 0; j < t.b_configs.size(); ++j) {
                    const Complex amp = t.lambda * t.u(static_cast<Eigen::Index>(i)) * t.v(static_cast<Eigen::Index>(j));
                    entries.push_back({cut_.join(t.a_configs[i], t.b_configs[j]), amp});
                }
            }
        }
        return PureState::from_sparse(cut_.sites(), std::move(entries));
    }

    /// |<state| reconstruction>|
    double fidelity(const PureState& state) const { return std::abs(core::inner_product(state, reconstruct())); }

private:
    BipartiteCut cut_;
    std::vector<Term> terms_;
};

inline SchmidtDecomposition schmidt_decomposition(const PureState& state, const BipartiteCut& cut)
{
    auto coeffs = detail::coefficient_blocks(state, cut, Side::a);
    std::vector<std::vector<SchmidtDecomposition::Term>> per_block(coeffs.size());
    core::parallel_for(coeffs.size(), core::default_thread_count(), [&](std::size_t k) {
        const auto& c = coeffs[k];
        // JacobiSVD: the divide-and-conquer solver in Eigen 3.4.0 mis-deflates repeated singular values.
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c.psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sigma = svd.singularValues();
        // Terms at zero weight carry no Schmidt vectors worth keeping.
        for (Eigen::Index i = 0; i < sigma.size() && sigma(i) > kSchmidtRankThreshold; ++i) {
            per_block[k].push_back({sigma(i), c.labels.front(), c.rows, svd.matrixU().col(i), c.cols,
                                    svd.matrixV().col(i).conjugate()});
        }
    });
    std::vector<SchmidtDecomposition::Term> terms;
    for (auto& block : per_block) {
        for (auto& t : block) {
            terms.push_back(std::move(t));
        }
    }
    return SchmidtDecomposition(cut, std::move(terms));
}

inline SchmidtSpectrum schmidt_spectrum(const PureState& state, const BipartiteCut& cut)
{
    return schmidt_decomposition(state, cut).spectrum();
}

/// Half-chain entropy in bits via the Schmidt spectrum.
inline double half_chain_entropy(const PureState& state, LogBase base = LogBase::bits)
{
    return schmidt_spectrum(state, BipartiteCut::half(state.sites())).entropy(base);
}

/// Large-N half-chain entropy of m magnons with distinct wavenumbers: m bits.
inline double entropy_limit_distinct(int magnons)
{
    if (magnons < 0) {
        throw InputError("magnon number must be nonnegative");
    }
    return static_cast<double>(magnons);
}

/// Half-chain entropy of the Dicke state from its hypergeometric block weights.
/// Each block is a product of two Dicke states, so the weights are the spectrum.
inline double dicke_entropy(int n_sites, int magnons, LogBase base = LogBase::bits)
{
    if (n_sites % 2 != 0) {
        throw OddSizeError("half-chain cut needs even N, got " + std::to_string(n_sites));
    }
    if (magnons < 0 || magnons > n_sites) {
        throw SectorRangeError("magnon number outside 0..N");
    }
    const int half = n_sites / 2;
    const double total = static_cast<double>(core::binomial(n_sites, magnons));
    std::vector<double> w;
    for (int a = std::max(0, magnons - half); a <= std::min(half, magnons); ++a) {
        w.push_back(static_cast<double>(core::binomial(half, a)) *
                    static_cast<double>(core::binomial(half, magnons - a)) / total);
    }
    return shannon_entropy(w, base);
}

} // namespace magnon::entanglement
