#include "magnon/magnon.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

namespace ex = magnon::experiment;

void emit(const ex::CsvTable& table, const std::string& path)
{
    if (path.empty() || path == "-") {
        table.write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw magnon::InputError("cannot open output file " + path);
    }
    table.write(out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Many-magnon states: fluctuation index p and half-chain entropy"};
    app.require_subcommand(1);

    ex::RunOptions options;
    unsigned threads = options.threads;
    std::string eigen_mode = "auto";
    app.add_option("--threads", threads, "worker threads for VCM entries")->check(CLI::Range(1u, 1024u));
    app.add_option("--eigen", eigen_mode, "eigensolver: auto, dense or iterative")
        ->check(CLI::IsMember({"auto", "dense", "iterative"}));

    int fig_id = 1;
    ex::NRange fig_range{4, 4, 2};
    std::string fig_out;
    auto* fig = app.add_subcommand("fig", "reproduce a figure as CSV");
    fig->add_option("--id", fig_id, "figure number 1-5")->required()->check(CLI::Range(1, 5));
    fig->add_option("--nmax", fig_range.stop, "largest N")->required();
    fig->add_option("--nmin", fig_range.start, "smallest N")->capture_default_str();
    fig->add_option("--nstep", fig_range.step, "N step")->capture_default_str();
    fig->add_option("--out", fig_out, "output path, stdout if omitted");

    ex::NRange table_range{4, 4, 2};
    std::string table_out;
    auto* table = app.add_subcommand("table1", "linear entropy fits for band states");
    table->add_option("--nmax", table_range.stop, "largest N")->required();
    table->add_option("--nmin", table_range.start, "smallest N")->capture_default_str();
    table->add_option("--out", table_out, "output path, stdout if omitted");

    std::string spec;
    std::string nrange;
    std::string analyze_out;
    std::string base = "2";
    bool spectrum = false;
    auto* analyze = app.add_subcommand("analyze", "e_max, entropy and p verdict for a state spec");
    analyze->add_option("--spec", spec, "state spec, e.g. \"dicke(N=N,m=N/2)\"")->required();
    analyze->add_option("--nrange", nrange, "N range a:b:s")->required();
    analyze->add_option("--out", analyze_out, "output path, stdout if omitted");
    analyze->add_option("--base", base, "entropy log base: 2 or e")->check(CLI::IsMember({"2", "e"}));
    analyze->add_flag("--spectrum", spectrum, "add minimum eigenvalue and trace columns");

    auto* selftest = app.add_subcommand("selftest", "oracle-equivalence checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    options.threads = threads;
    static const std::map<std::string, magnon::vcm::EigenMode> modes{
        {"auto", magnon::vcm::EigenMode::automatic},
        {"dense", magnon::vcm::EigenMode::dense},
        {"iterative", magnon::vcm::EigenMode::iterative}};
    options.eigen.mode = modes.at(eigen_mode);
    options.base = base == "e" ? magnon::entanglement::LogBase::nats : magnon::entanglement::LogBase::bits;
    options.spectrum = spectrum;

    try {
        if (fig->parsed()) {
            emit(ex::run_figure(fig_id, fig_range, options), fig_out);
        } else if (table->parsed()) {
            emit(ex::run_table1(table_range, options), table_out);
        } else if (analyze->parsed()) {
            emit(ex::run_analyze(spec, ex::NRange::parse(nrange), options), analyze_out);
        } else if (selftest->parsed()) {
            return ex::run_selftest(std::cout, options) ? 0 : 4;
        }
    } catch (const magnon::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const magnon::CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return 3;
    } catch (const magnon::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
