#pragma once

#include "../core/builders.hpp"
#include "../core/errors.hpp"
#include "../core/parallel.hpp"
#include "../entanglement/entropy.hpp"
#include "../fit/scaling_fits.hpp"
#include "../oracle/analytic.hpp"
#include "../vcm/index_p.hpp"
#include "../vcm/max_eigen.hpp"
#include "../vcm/vcm_matrix.hpp"
#include "csv.hpp"
#include "spec_parser.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace magnon::experiment {

inline constexpr const char* kVersion = "1.0.0";

// Desk-scale limits.
inline constexpr std::uint64_t kMaxVcmAmplitudes = core::binomial(24, 12);
inline constexpr std::uint64_t kMaxEntropyAmplitudes = core::binomial(20, 10);
inline constexpr int kMaxDickeEntropySites = 40;
inline constexpr int kMaxModexpRegister = 16;

struct RunOptions {
    unsigned threads = core::default_thread_count();
    vcm::EigenOptions eigen;
    entanglement::LogBase base = entanglement::LogBase::bits;
    bool spectrum = false; // analyze: add min eigenvalue and trace columns
};

/// Inclusive range start:stop:step.
struct NRange {
    int start = 4;
    int stop = 4;
    int step = 2;

    std::vector<int> values() const
    {
        std::vector<int> out;
        for (int n = start; n <= stop; n += step) {
            out.push_back(n);
        }
        return out;
    }

    static NRange parse(const std::string& text)
    {
        NRange r;
        const auto c1 = text.find(':');
        const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
        auto to_int = [&](const std::string& s) {
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(s, &used);
            } catch (const std::exception&) {
                used = std::string::npos;
            }
            if (s.empty() || used != s.size()) {
                throw InputError("bad N range '" + text + "', expected a:b:s");
            }
            return v;
        };
        if (c1 == std::string::npos) {
            r.start = r.stop = to_int(text);
            r.step = 1;
        } else {
            r.start = to_int(text.substr(0, c1));
            r.stop = to_int(text.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
            r.step = c2 == std::string::npos ? 1 : to_int(text.substr(c2 + 1));
        }
        r.validate();
        return r;
    }

    void validate() const
    {
        if (step <= 0) {
            throw InputError("N range step must be positive");
        }
        if (start < 1 || stop < start) {
            throw InputError("N range needs 1 <= start <= stop");
        }
    }
};

/// Number of amplitudes the builder stores for this spec.
inline std::uint64_t stored_amplitudes(const StateSpec& s)
{
    switch (s.kind) {
    case StateKind::magnons:
    case StateKind::dicke:
    case StateKind::band:
    case StateKind::w:
        return core::binomial(s.n, s.magnons());
    case StateKind::product:
        return s.n >= 63 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << s.n;
    case StateKind::ghz:
        return 2;
    case StateKind::modexp:
        return std::uint64_t{1} << std::min(s.n, 63);
    }
    return 0;
}

inline void check_build_caps(const StateSpec& s)
{
    if (s.kind == StateKind::modexp && s.n > kMaxModexpRegister) {
        throw CapExceeded("spin-state-core", "modexp first register limited to N1 <= " +
                                                 std::to_string(kMaxModexpRegister));
    }
}

inline double compute_emax(const StateSpec& s, const RunOptions& options = {})
{
    check_build_caps(s);
    if (stored_amplitudes(s) > kMaxVcmAmplitudes) {
        throw CapExceeded("fluctuation-index", "VCM limited to " + std::to_string(kMaxVcmAmplitudes) +
                                                   " stored amplitudes, " + s.text() + " needs more");
    }
    const auto state = build_state(s);
    const auto v = vcm::build_vcm(state, {options.threads});
    return vcm::max_eigen(v, options.eigen).value;
}

struct EntropyResult {
    double entropy = 0.0;
    int rank = 0;
};

/// Half-chain entropy. Dicke specs use the closed block-weight path.
inline EntropyResult compute_entropy(const StateSpec& s, const RunOptions& options = {})
{
    check_build_caps(s);
    const int n = s.sites();
    if (n % 2 != 0) {
        throw OddSizeError("half-chain entropy needs even N, got " + std::to_string(n));
    }
    if (s.kind == StateKind::dicke) {
        if (n > kMaxDickeEntropySites) {
            throw CapExceeded("bipartite-entropy", "Dicke entropy limited to N <= " +
                                                       std::to_string(kMaxDickeEntropySites));
        }
        const int half = n / 2;
        const int rank = std::min(half, s.m) - std::max(0, s.m - half) + 1;
        return {entanglement::dicke_entropy(n, s.m, options.base), rank};
    }
    if (stored_amplitudes(s) > kMaxEntropyAmplitudes) {
        throw CapExceeded("bipartite-entropy", "entropy limited to " + std::to_string(kMaxEntropyAmplitudes) +
                                                   " stored amplitudes, " + s.text() + " needs more");
    }
    const auto state = build_state(s);
    const auto spectrum = entanglement::schmidt_spectrum(state, entanglement::BipartiteCut::half(n));
    return {spectrum.entropy(options.base), spectrum.rank()};
}

enum class Quantity { emax, entropy };

struct Series {
    std::string label;
    Quantity quantity;
    std::function<std::optional<std::string>(int)> spec; // nullopt: not defined at this N
};

inline std::string version_line()
{
    return std::string("version: magnon ") + kVersion +
           " (spin-state-core, fluctuation-index, analytic-oracle, bipartite-entropy, scaling-fits, "
           "experiment-cli)";
}

namespace detail {

inline std::string zeros(int count)
{
    return count <= 0 ? std::string() : "0^" + std::to_string(count);
}

inline std::string join_k(int n, const std::string& list)
{
    return "magnons(N=" + std::to_string(n) + ";k=" + list + ")";
}

inline std::optional<std::string> if_valid(bool ok, std::string text)
{
    return ok ? std::optional<std::string>(std::move(text)) : std::nullopt;
}

struct FigureDef {
    Quantity quantity;
    std::vector<Series> series;
    std::vector<std::pair<std::string, std::function<std::optional<double>(int)>>> lines;
};

// Nearest index to k = 2 pi / 3. Wavenumbers that stay apart as N grows keep
// the magnons distinguishable; neighbouring indices (0, 1) merge instead.
inline int third_index(int n) { return static_cast<int>(std::lround(n / 3.0)); }

inline FigureDef figure_def(int id)
{
    using std::to_string;
    FigureDef f;
    switch (id) {
    case 1:
        f.quantity = Quantity::emax;
        f.series = {
            {"j=(0,0)", Quantity::emax, [](int n) { return if_valid(n >= 2, join_k(n, "0,0")); }},
            {"j=(0,1)", Quantity::emax, [](int n) { return if_valid(n >= 2, join_k(n, "0,1")); }},
            {"j=(0,2)", Quantity::emax, [](int n) { return if_valid(n >= 4, join_k(n, "0,2")); }},
        };
        f.lines = {{"line 1+(5N-12)/N", [](int n) { return std::optional<double>(1.0 + (5.0 * n - 12.0) / n); }}};
        break;
    case 2:
        f.quantity = Quantity::emax;
        f.series = {
            {"band m=N/2", Quantity::emax,
             [](int n) { return if_valid(n % 2 == 0, "band(N=" + to_string(n) + ",m=" + to_string(n / 2) + ")"); }},
            {"band m=N/4", Quantity::emax,
             [](int n) { return if_valid(n % 4 == 0, "band(N=" + to_string(n) + ",m=" + to_string(n / 4) + ")"); }},
        };
        break;
    case 3:
        f.quantity = Quantity::emax;
        f.series = {
            {"j=0^(N/2)", Quantity::emax,
             [](int n) { return if_valid(n % 2 == 0, join_k(n, zeros(n / 2))); }},
            {"j=(0^(N/2-1),1)", Quantity::emax,
             [](int n) {
                 const std::string z = zeros(n / 2 - 1);
                 return if_valid(n % 2 == 0 && n >= 2, join_k(n, z.empty() ? "1" : z + ",1"));
             }},
            {"j=(0^(N/2-2),1,-1)", Quantity::emax,
             [](int n) {
                 const std::string z = zeros(n / 2 - 2);
                 return if_valid(n % 2 == 0 && n >= 4, join_k(n, z.empty() ? "1,-1" : z + ",1,-1"));
             }},
        };
        f.lines = {{"line 1+N/2", [](int n) { return std::optional<double>(1.0 + n / 2.0); }}};
        break;
    case 4:
        f.quantity = Quantity::entropy;
        f.series = {
            {"m=3 distinct j=(-t,0,t)", Quantity::entropy,
             [](int n) {
                 const std::string t = to_string(third_index(n));
                 return if_valid(n >= 4, join_k(n, "-" + t + ",0," + t));
             }},
            {"m=3 j=(0,0,t)", Quantity::entropy,
             [](int n) { return if_valid(n >= 4, join_k(n, "0,0," + to_string(third_index(n)))); }},
            {"m=3 j=(0,0,0)", Quantity::entropy, [](int n) { return if_valid(n >= 4, join_k(n, "0,0,0")); }},
            {"m=2 distinct j=(0,N/2)", Quantity::entropy,
             [](int n) { return if_valid(n >= 4 && n % 2 == 0, join_k(n, "0," + to_string(n / 2))); }},
            {"m=2 j=(0,0)", Quantity::entropy, [](int n) { return if_valid(n >= 4, join_k(n, "0,0")); }},
        };
        f.lines = {
            {"limit m=3", [](int) { return std::optional<double>(entanglement::entropy_limit_distinct(3)); }},
            {"limit m=2", [](int) { return std::optional<double>(entanglement::entropy_limit_distinct(2)); }},
        };
        break;
    case 5:
        f.quantity = Quantity::entropy;
        for (int d : {2, 4, 6}) {
            f.series.push_back({"band m=N/" + to_string(d), Quantity::entropy, [d](int n) {
                                    return if_valid(n % d == 0 && n % 2 == 0,
                                                    "band(N=" + to_string(n) + ",m=" + to_string(n / d) + ")");
                                }});
        }
        break;
    default:
        throw InputError("figure id must be 1..5, got " + to_string(id));
    }
    return f;
}

inline double evaluate(const Series& s, const std::string& spec, const RunOptions& options)
{
    const StateSpec parsed = parse_state_spec(spec);
    return s.quantity == Quantity::emax ? compute_emax(parsed, options) : compute_entropy(parsed, options).entropy;
}

inline void check_range(const NRange& r)
{
    r.validate();
    if (r.stop > core::kMaxSites) {
        throw CapExceeded("spin-state-core", "N limited to " + std::to_string(core::kMaxSites));
    }
}

} // namespace detail

/// Figure reproduction in long form: one row per (series, N).
inline CsvTable run_figure(int id, const NRange& range, const RunOptions& options = {})
{
    detail::check_range(range);
    const detail::FigureDef def = detail::figure_def(id);
    CsvTable t({"N", "series", "value"});
    t.add_metadata("command: fig --id " + std::to_string(id) + " --nmin " + std::to_string(range.start) +
                   " --nmax " + std::to_string(range.stop) + " --nstep " + std::to_string(range.step));
    t.add_metadata(version_line());
    t.add_metadata(std::string("quantity: ") + (def.quantity == Quantity::emax ? "e_max" : "S_N/2 (bits)"));

    std::vector<fit::ScalingSeries> collected;
    for (const auto& s : def.series) {
        fit::ScalingSeries values(s.label);
        for (int n : range.values()) {
            if (const auto spec = s.spec(n)) {
                const double v = detail::evaluate(s, *spec, options);
                values.add(n, v);
                t.add_row({static_cast<double>(n), s.label, v});
            }
        }
        t.add_metadata("series " + s.label + ": " + (s.spec(range.stop) ? *s.spec(range.stop) : std::string("-")) +
                       " at N=" + std::to_string(range.stop));
        collected.push_back(std::move(values));
    }
    for (const auto& [label, line] : def.lines) {
        for (int n : range.values()) {
            if (const auto v = line(n)) {
                t.add_row({static_cast<double>(n), label, *v});
            }
        }
    }
    if (id == 5) {
        for (const auto& s : collected) {
            if (s.size() < 3) {
                t.add_metadata("fit " + s.label() + ": insufficient data");
                continue;
            }
            const auto r = fit::linear_fit(s);
            t.add_metadata("fit " + s.label() + ": a=" + format_number(r.slope) + " b=" + format_number(r.intercept) +
                           " range N=" + std::to_string(s.sizes().front()) + ".." +
                           std::to_string(s.sizes().back()));
            for (int n : s.sizes()) {
                t.add_row({static_cast<double>(n), "fit " + s.label(), r.slope * n + r.intercept});
            }
        }
    }
    return t;
}

struct Table1Row {
    std::string family;
    fit::FitResult fit;
    int n_min = 0;
    int n_max = 0;
};

/// Linear fits S = aN + b for band states with m = N/2, N/4, N/6 over even N in the range.
inline std::vector<Table1Row> table1_fits(const NRange& range, const RunOptions& options = {})
{
    detail::check_range(range);
    std::vector<Table1Row> out;
    for (int d : {2, 4, 6}) {
        fit::ScalingSeries s("m=N/" + std::to_string(d));
        for (int n = range.start; n <= range.stop; ++n) {
            if (n % 2 != 0 || n % d != 0) {
                continue;
            }
            StateSpec spec;
            spec.kind = StateKind::band;
            spec.n = n;
            spec.m = n / d;
            StateTemplate::validate(spec);
            s.add(n, compute_entropy(spec, options).entropy);
        }
        if (s.size() < 3) {
            throw DivisibilityError("family m=N/" + std::to_string(d) + " has only " + std::to_string(s.size()) +
                                    " sizes divisible by " + std::to_string(d) + " in " +
                                    std::to_string(range.start) + ".." + std::to_string(range.stop) +
                                    "; a fit needs 3");
        }
        out.push_back({s.label(), fit::linear_fit(s), s.sizes().front(), s.sizes().back()});
    }
    return out;
}

inline CsvTable run_table1(const NRange& range, const RunOptions& options = {})
{
    const auto rows = table1_fits(range, options);
    CsvTable t({"family", "a", "a_error", "b", "b_error", "n_min", "n_max", "points"});
    t.add_metadata("command: table1 --nmin " + std::to_string(range.start) + " --nmax " + std::to_string(range.stop));
    t.add_metadata(version_line());
    t.add_metadata("fit: ordinary least squares S = aN + b, errors from residual variance on n-2 dof");
    for (const auto& r : rows) {
        t.add_metadata("fit range " + r.family + ": even N in " + std::to_string(r.n_min) + ".." +
                       std::to_string(r.n_max));
        t.add_row({r.family, r.fit.slope, r.fit.slope_error, r.fit.intercept, r.fit.intercept_error,
                   static_cast<double>(r.n_min), static_cast<double>(r.n_max), static_cast<double>(r.fit.points)});
    }
    return t;
}

struct AnalyzeRow {
    int n = 0;      // scan variable
    int sites = 0;  // sites of the built state
    double emax = 0.0;
    double spectrum_min = std::nan("");
    double trace = std::nan("");
    double entropy = std::nan(""); // nan for odd site counts
    double rank = std::nan("");
};

struct AnalyzeResult {
    std::vector<AnalyzeRow> rows;
    std::optional<vcm::PClassification> p; // needs at least 4 sizes
};

inline AnalyzeResult analyze(const std::string& spec_text, const NRange& range, const RunOptions& options = {})
{
    detail::check_range(range);
    const StateTemplate tpl = parse_state_template(spec_text);
    AnalyzeResult result;
    fit::ScalingSeries emax_series(spec_text);
    for (int n : range.values()) {
        const StateSpec spec = tpl.instantiate(n);
        AnalyzeRow row;
        row.n = n;
        row.sites = spec.sites();
        check_build_caps(spec);
        if (stored_amplitudes(spec) > kMaxVcmAmplitudes) {
            throw CapExceeded("fluctuation-index", "VCM limited to " + std::to_string(kMaxVcmAmplitudes) +
                                                       " stored amplitudes");
        }
        const auto state = build_state(spec);
        const auto v = vcm::build_vcm(state, {options.threads});
        row.emax = vcm::max_eigen(v, options.eigen).value;
        if (options.spectrum) {
            row.spectrum_min = v.spectrum()(0);
            row.trace = v.trace();
        }
        if (row.sites % 2 == 0) {
            const auto e = compute_entropy(spec, options);
            row.entropy = e.entropy;
            row.rank = e.rank;
        }
        // specs that ignore N repeat one size; the fit keeps each size once
        if (emax_series.size() == 0 || row.sites > emax_series.sizes().back()) {
            emax_series.add(row.sites, row.emax);
        }
        result.rows.push_back(row);
    }
    if (emax_series.size() >= vcm::kMinSeriesPoints) {
        result.p = vcm::estimate_p(emax_series);
    }
    return result;
}

inline CsvTable run_analyze(const std::string& spec_text, const NRange& range, const RunOptions& options = {})
{
    const AnalyzeResult r = analyze(spec_text, range, options);
    std::vector<std::string> header{"N", "sites", "e_max"};
    if (options.spectrum) {
        header.insert(header.end(), {"spectrum_min", "trace"});
    }
    header.insert(header.end(), {"entropy", "schmidt_rank"});
    CsvTable t(header);
    t.add_metadata("command: analyze --spec \"" + spec_text + "\" --nrange " + std::to_string(range.start) + ":" +
                   std::to_string(range.stop) + ":" + std::to_string(range.step));
    t.add_metadata(version_line());
    t.add_metadata("spec: " + spec_text);
    t.add_metadata(std::string("entropy base: ") + (options.base == entanglement::LogBase::bits ? "2" : "e"));
    if (r.p) {
        t.add_metadata("p-fit: slope=" + format_number(r.p->slope) + " slope_error=" + format_number(r.p->slope_error) +
                       " p=" + format_number(r.p->p) + " verdict=" + vcm::verdict_name(r.p->verdict));
    } else {
        t.add_metadata("p-fit: needs at least 4 distinct sizes");
    }
    for (const auto& row : r.rows) {
        std::vector<Cell> cells{static_cast<double>(row.n), static_cast<double>(row.sites), row.emax};
        if (options.spectrum) {
            cells.insert(cells.end(), {row.spectrum_min, row.trace});
        }
        cells.insert(cells.end(), {row.entropy, row.rank});
        t.add_row(std::move(cells));
    }
    return t;
}

/// Oracle-equivalence checks on small Dicke, GHZ and W states. Prints one line per check.
inline bool run_selftest(std::ostream& os, const RunOptions& options = {})
{
    bool all = true;
    auto report = [&](bool ok, const std::string& what) {
        os << (ok ? "PASS " : "FAIL ") << what << '\n';
        all = all && ok;
    };
    for (int n = 4; n <= 12; n += 2) {
        double entry_err = 0.0;
        double spectrum_err = 0.0;
        double emax_err = 0.0;
        double entropy_err = 0.0;
        for (int m = 0; m <= n; ++m) {
            const auto state = core::dicke_state(n, m);
            const auto v = vcm::build_vcm(state, {options.threads});
            const auto ref = oracle::dicke_vcm_entries(n, m);
            entry_err = std::max(entry_err, (v.matrix() - ref.matrix()).cwiseAbs().maxCoeff());
            std::vector<double> expected;
            for (const auto& e : oracle::dicke_spectrum(n, m).levels) {
                expected.insert(expected.end(), static_cast<std::size_t>(e.multiplicity), e.value);
            }
            std::sort(expected.begin(), expected.end());
            const auto got = v.spectrum();
            for (std::size_t i = 0; i < expected.size(); ++i) {
                spectrum_err = std::max(spectrum_err, std::abs(got(static_cast<Eigen::Index>(i)) - expected[i]));
            }
            // the closed form holds for m <= N/2; above that e_4 is the largest level
            const double e_ref = 2 * m <= n ? oracle::dicke_emax(n, m) : oracle::dicke_spectrum(n, m).max();
            emax_err = std::max(emax_err, std::abs(vcm::max_eigen(v, options.eigen).value - e_ref));
            const auto weights = oracle::hypergeometric_weights(n, m);
            const double s_ref = entanglement::shannon_entropy(weights);
            entropy_err = std::max(entropy_err, std::abs(entanglement::half_chain_entropy(state) - s_ref));
        }
        const std::string tag = " N=" + std::to_string(n) + " all m";
        report(entry_err <= 1e-10, "Dicke VCM entries vs closed form" + tag + " max err " + format_number(entry_err));
        report(spectrum_err <= 1e-9, "Dicke VCM spectrum vs closed form" + tag + " max err " + format_number(spectrum_err));
        report(emax_err <= 1e-8, "Dicke e_max vs closed form" + tag + " max err " + format_number(emax_err));
        report(entropy_err <= 1e-10, "Dicke entropy vs block weights" + tag + " max err " + format_number(entropy_err));
    }
    for (int n = 4; n <= 12; n += 2) {
        const double s_ghz = entanglement::half_chain_entropy(core::ghz_state(n));
        const double s_w = entanglement::half_chain_entropy(core::w_state(n));
        report(std::abs(s_ghz - 1.0) <= 1e-10, "GHZ entropy = 1 at N=" + std::to_string(n));
        report(std::abs(s_w - 1.0) <= 1e-10, "W entropy = 1 at N=" + std::to_string(n));
        const double e_ghz = vcm::max_eigen(vcm::build_vcm(core::ghz_state(n), {options.threads})).value;
        report(std::abs(e_ghz - n) <= 1e-8, "GHZ e_max = N at N=" + std::to_string(n));
    }
    return all;
}

} // namespace magnon::experiment
