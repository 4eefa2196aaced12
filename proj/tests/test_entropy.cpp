#include "magnon/core/builders.hpp"
#include "magnon/entanglement/entropy.hpp"
#include "oracles/dense.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace magnon;
using namespace magnon::entanglement;

namespace {

struct Named {
    std::string name;
    core::PureState state;
};

std::vector<Named> small_states()
{
    std::vector<Named> out;
    for (int n = 2; n <= 10; ++n) {
        for (int m = 0; m <= n; ++m) {
            out.push_back({"dicke", core::dicke_state(n, m)});
        }
        out.push_back({"ghz", core::ghz_state(n)});
        out.push_back({"w", core::w_state(n)});
        out.push_back({"product", core::product_state(n, 1.1, 0.4)});
        if (n >= 3) {
            out.push_back({"magnons", core::m_magnon_state(n, {0, 1})});
            out.push_back({"band", core::band_state(n, n / 2)});
        }
    }
    out.push_back({"magnons3", core::m_magnon_state(9, {-1, 2, 2})});
    out.push_back({"modexp", core::modexp_state(4, 2, 15)});
    out.push_back({"modexp", core::modexp_state(3, 2, 5)});
    return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace

TEST(BipartiteCut, Geometry)
{
    const auto cut = BipartiteCut::half(8);
    EXPECT_EQ(cut.a_sites(), 4);
    EXPECT_EQ(cut.b_sites(), 4);
    EXPECT_EQ(cut.a_part(0b10110101), 0b0101u);
    EXPECT_EQ(cut.b_part(0b10110101), 0b1011u);
    EXPECT_EQ(cut.join(0b0101, 0b1011), 0b10110101u);
    EXPECT_THROW(BipartiteCut::half(7), OddSizeError);
    EXPECT_THROW(BipartiteCut::prefix(5, 0), InputError);
    EXPECT_THROW(BipartiteCut::prefix(5, 5), InputError);
}

TEST(ReducedDensity, MatchesDensePartialTrace)
{
    for (const auto& [name, state] : small_states()) {
        const int n = state.sites();
        const auto psi = oracle_dense::expand(state);
        for (int k = 1; k < n; ++k) {
            const auto rho = reduced_density(state, BipartiteCut::prefix(n, k));
            const Eigen::MatrixXcd want = oracle_dense::partial_trace(psi, n, k);
            EXPECT_LE(max_abs(rho.to_dense() - want), 1e-12) << name << " N=" << n << " k=" << k;
            EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
        }
    }
}

TEST(ReducedDensity, SidesShareSpectrum)
{
    for (const auto& [name, state] : small_states()) {
        const int n = state.sites();
        for (int k = 1; k < n; ++k) {
            const auto cut = BipartiteCut::prefix(n, k);
            auto a = reduced_density(state, cut, Side::a).eigenvalues();
            auto b = reduced_density(state, cut, Side::b).eigenvalues();
            auto nonzero = [](std::vector<double> v) {
                std::erase_if(v, [](double x) { return x < 1e-12; });
                return v;
            };
            a = nonzero(a);
            b = nonzero(b);
            ASSERT_EQ(a.size(), b.size()) << name << " N=" << n << " k=" << k;
            for (std::size_t i = 0; i < a.size(); ++i) {
                EXPECT_NEAR(a[i], b[i], 1e-12);
            }
        }
    }
}

TEST(ReducedDensity, WStateBlocks)
{
    for (int n = 2; n <= 12; n += 2) {
        const auto rho = reduced_density(core::w_state(n), BipartiteCut::half(n));
        ASSERT_EQ(rho.blocks().size(), 2u);
        EXPECT_EQ(rho.blocks()[0].labels, std::vector<int>{0});
        EXPECT_NEAR(rho.blocks()[0].rho(0, 0).real(), 0.5, 1e-14);
        EXPECT_EQ(rho.blocks()[1].configs.size(), static_cast<std::size_t>(n / 2));
        const auto e = rho.eigenvalues();
        EXPECT_NEAR(e.back(), 0.5, 1e-14);
        EXPECT_NEAR(e[e.size() - 2], 0.5, 1e-14);
        EXPECT_NEAR(von_neumann_entropy(rho), 1.0, 1e-12);
    }
}

TEST(ReducedDensity, GhzMergesEndSectors)
{
    const auto rho = reduced_density(core::ghz_state(6), BipartiteCut::half(6));
    ASSERT_EQ(rho.blocks().size(), 2u);
    EXPECT_NEAR(von_neumann_entropy(rho), 1.0, 1e-12);
}

TEST(Entropy, Anchors)
{
    for (int n = 2; n <= 20; n += 2) {
        EXPECT_NEAR(half_chain_entropy(core::ghz_state(n)), 1.0, 1e-12);
        EXPECT_NEAR(half_chain_entropy(core::w_state(n)), 1.0, 1e-12);
        EXPECT_NEAR(half_chain_entropy(core::product_state(n, 0.8, 2.0)), 0.0, 1e-12);
        EXPECT_EQ(schmidt_spectrum(core::product_state(n, 0.8, 2.0), BipartiteCut::half(n)).rank(), 1);
    }
    const double expected = -(2.0 * (1.0 / 6.0) * std::log2(1.0 / 6.0) + (2.0 / 3.0) * std::log2(2.0 / 3.0));
    EXPECT_NEAR(half_chain_entropy(core::dicke_state(4, 2)), expected, 1e-12);
    EXPECT_NEAR(expected, 1.2516291673878228, 1e-12);
}

TEST(Entropy, NaturalLogScalesByLnTwo)
{
    const auto s = core::dicke_state(10, 4);
    EXPECT_NEAR(half_chain_entropy(s, LogBase::nats), half_chain_entropy(s) * std::numbers::ln2, 1e-12);
    EXPECT_NEAR(dicke_entropy(10, 4, LogBase::nats), dicke_entropy(10, 4) * std::numbers::ln2, 1e-12);
}

TEST(Entropy, ShannonGuards)
{
    EXPECT_THROW(shannon_entropy({0.5, 0.4}), TraceDeviation);
    EXPECT_NEAR(shannon_entropy({0.5, 0.5}), 1.0, 1e-15);
    EXPECT_EQ(shannon_entropy({1.0, 0.0}), 0.0);
    EXPECT_THROW(half_chain_entropy(core::w_state(5)), OddSizeError);
    EXPECT_THROW(dicke_entropy(5, 2), OddSizeError);
}

TEST(Schmidt, ReconstructionAndConsistency)
{
    std::vector<core::PureState> states;
    for (int n = 4; n <= 16; n += 4) {
        states.push_back(core::dicke_state(n, n / 2));
        states.push_back(core::band_state(n, n / 2));
        states.push_back(core::m_magnon_state(n, {0, 1, 2}));
        states.push_back(core::ghz_state(n));
        states.push_back(core::product_state(n, 2.0, 0.3));
    }
    states.push_back(core::modexp_state(4, 7, 15));
    for (const auto& s : states) {
        const auto cut = BipartiteCut::half(s.sites());
        const auto d = schmidt_decomposition(s, cut);
        EXPECT_NEAR(d.fidelity(s), 1.0, 1e-10);
        EXPECT_NEAR(d.spectrum().weight(), 1.0, 1e-10);
        EXPECT_NEAR(d.spectrum().entropy(), von_neumann_entropy(reduced_density(s, cut)), 1e-10);
        for (const auto& t : d.terms()) {
            EXPECT_NEAR(t.u.norm(), 1.0, 1e-10);
            EXPECT_NEAR(t.v.norm(), 1.0, 1e-10);
        }
    }
}

TEST(Schmidt, MatchesDenseEntropy)
{
    for (const auto& [name, state] : small_states()) {
        const int n = state.sites();
        if (n % 2 != 0) {
            continue;
        }
        const auto rho = oracle_dense::partial_trace(oracle_dense::expand(state), n, n / 2);
        EXPECT_NEAR(half_chain_entropy(state), oracle_dense::entropy_bits(rho), 1e-10) << name << " N=" << n;
    }
}

TEST(Schmidt, EqualPairHasRankThree)
{
    for (int n = 4; n <= 16; n += 2) {
        const auto s = schmidt_spectrum(core::m_magnon_state(n, {0, 0}), BipartiteCut::half(n));
        EXPECT_EQ(s.rank(), 3) << "N=" << n;
    }
}

TEST(Schmidt, WCoefficients)
{
    const auto s = schmidt_spectrum(core::w_state(10), BipartiteCut::half(10));
    EXPECT_EQ(s.rank(), 2);
    for (const auto& c : s.coefficients()) {
        if (c.value > kSchmidtRankThreshold) {
            EXPECT_NEAR(c.value, std::numbers::sqrt2 / 2, 1e-14);
        }
    }
}

// Wavenumbers near k = (0, pi) and (0, +-2pi/3) stay apart as N grows.
TEST(Entropy, DistinctMagnonsApproachLimit)
{
    const auto pair = [](int n) { return std::vector<int>{0, n / 2}; };
    const auto triple = [](int n) {
        const int t = static_cast<int>(std::lround(n / 3.0));
        return std::vector<int>{-t, 0, t};
    };
    for (int m : {2, 3}) {
        double last = 0.0;
        for (int n = 8; n <= 20; n += 2) {
            const auto js = m == 2 ? pair(n) : triple(n);
            const double s = half_chain_entropy(core::m_magnon_state(n, js));
            EXPECT_GE(s, last) << "m=" << m << " N=" << n;
            EXPECT_LT(s, entropy_limit_distinct(m));
            auto equal = js;
            equal[1] = equal[0];
            EXPECT_LT(half_chain_entropy(core::m_magnon_state(n, equal)), s);
            last = s;
        }
        EXPECT_GT(last, m - 0.35);
    }
    EXPECT_THROW(entropy_limit_distinct(-1), InputError);
}

// Neighbouring indices close the wavenumber gap like 2 pi / N and lose entropy.
TEST(Entropy, NeighbouringMagnonsDrift)
{
    EXPECT_LT(half_chain_entropy(core::m_magnon_state(20, {0, 1})), half_chain_entropy(core::m_magnon_state(8, {0, 1})));
}

TEST(Entropy, DickeFastPathMatchesStates)
{
    for (int n = 2; n <= 20; n += 2) {
        for (int m = 0; m <= n; ++m) {
            EXPECT_NEAR(dicke_entropy(n, m), oracle_dense::hypergeometric_entropy(n, m), 1e-12);
            if (n <= 16) {
                EXPECT_NEAR(dicke_entropy(n, m), half_chain_entropy(core::dicke_state(n, m)), 1e-10);
            }
        }
    }
    for (int m = 0; m <= 40; ++m) {
        EXPECT_NEAR(dicke_entropy(40, m), oracle_dense::hypergeometric_entropy(40, m), 1e-10);
    }
}

// Four equal Schmidt coefficients in one 32 x 16 block.
TEST(Schmidt, RepeatedCoefficientsKeepFullWeight)
{
    const auto s = core::modexp_state(7, 2, 5);
    const auto spec = schmidt_spectrum(s, BipartiteCut::half(s.sites()));
    EXPECT_NEAR(spec.weight(), 1.0, 1e-12);
    EXPECT_EQ(spec.rank(), 4);
    EXPECT_NEAR(spec.entropy(), 2.0, 1e-12);
}
