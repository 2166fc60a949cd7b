#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qmc/chain_spec.hpp"
#include "qmc/evolution.hpp"
#include "qmc/result_table.hpp"

namespace {

using nlohmann::json;
using qmc::BuiltSystem;
using qmc::Metadata;
using qmc::ResultTable;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct LoadedSpec {
    json doc;
    qmc::ChainSpec spec;
    std::uint64_t hash = 0;
};

LoadedSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qmc::SpecError("cannot open spec file: " + path);
    LoadedSpec loaded;
    try {
        loaded.doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw qmc::SpecError(std::string("parse error in ") + path + ": " + e.what());
    }
    loaded.spec = qmc::parse_chain_spec(loaded.doc);
    loaded.hash = qmc::spec_hash(loaded.doc);
    return loaded;
}

std::string hex_hash(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Metadata base_metadata(const BuiltSystem& built, double tol) {
    Metadata meta;
    meta["spec_hash"] = hex_hash(built.hash);
    meta["kind"] = built.kind;
    meta["spectral_source"] =
        built.system.spectral.source == qmc::SpectralSource::Analytic ? "analytic" : "numerical";
    meta["window"] = std::to_string(built.system.chain.size());
    meta["tolerance"] = qmc::format_double(tol);
    if (built.system.chain.window.is_truncated()) {
        meta["eps_tail"] = qmc::format_double(built.system.chain.window.eps_tail);
        meta["column_defect"] = qmc::format_double(built.system.chain.column_defect);
        meta["truncation_budget"] =
            qmc::format_double(10.0 * built.system.chain.window.eps_tail);
    }
    if (built.analytic) meta["n_valid"] = std::to_string(built.analytic->n_valid);
    return meta;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

std::string render(const Metadata& meta, const std::vector<ResultTable>& tables,
                   const std::string& format) {
    if (format == "json") return qmc::tables_to_json(meta, tables);
    return qmc::tables_to_csv(meta, tables);
}

int cmd_validate(const std::string& path, double tol) {
    const LoadedSpec loaded = load(path);
    // build_system would reject invalid graph/matrix input before reporting,
    // so validate the raw chain directly here
    if (const auto* fam = std::get_if<qmc::families::FamilySpec>(&loaded.spec)) {
        const auto sys = qmc::families::build(*fam);
        const auto report = qmc::validate_chain(sys.chain, tol);
        std::cout << "family=" << qmc::families::family_name(*fam)
                  << " window=" << sys.chain.size() << " n_valid=" << sys.n_valid << "\n"
                  << report.summary() << "\n";
        return report.passed ? kExitPass : kExitFail;
    }
    qmc::MarkovChain chain;
    if (const auto* gs = std::get_if<qmc::GraphSpec>(&loaded.spec)) {
        chain = qmc::simple_random_walk(gs->graph);
    } else {
        const auto& ms = std::get<qmc::MatrixSpec>(loaded.spec);
        chain.window = qmc::VertexWindow::finite(ms.kernel.rows() - 1);
        chain.kernel = ms.kernel;
        chain.pi = ms.pi;
    }
    const auto report = qmc::validate_chain(chain, tol);
    std::cout << report.summary() << "\n";
    return report.passed ? kExitPass : kExitFail;
}

int cmd_spectrum(const std::string& path, bool compare, const std::string& out_path,
                 const std::string& format, double tol) {
    const LoadedSpec loaded = load(path);
    const BuiltSystem built = qmc::build_system(loaded.spec, loaded.hash, tol);
    const int m = built.system.spectral.size();

    ResultTable table;
    table.name = "spectrum";
    table.columns = {"n", "kappa", "energy", "d_squared"};
    if (compare && !built.is_family())
        throw qmc::SpecError("--compare requires a family spec");
    std::optional<qmc::SpectralData> numerical;
    if (compare) {
        numerical = qmc::eigendecompose(qmc::hamiltonian(built.system.chain));
        table.columns.push_back("kappa_numerical");
    }

    const bool family = built.is_family();
    const int n_checked = family ? built.analytic->n_valid : m;
    for (int n = 0; n < m; ++n) {
        const double kappa =
            family ? built.analytic->kappa_closed[n] : built.system.spectral.kappa[n];
        const double d_sq = family ? built.analytic->norm_consts_closed[n] *
                                         built.analytic->norm_consts_closed[n]
                                   : 1.0;
        std::vector<double> row = {static_cast<double>(n), kappa, 1.0 - kappa, d_sq};
        if (compare) row.push_back(numerical->kappa[n]);
        table.add_row(std::move(row));
    }
    // deviation over sorted energies so a non-monotone closed-form kappa
    // still pairs with the right numerical level
    double max_dev = 0.0;
    if (compare) {
        std::vector<double> closed(n_checked), numeric(n_checked);
        for (int n = 0; n < n_checked; ++n) {
            closed[n] = 1.0 - built.analytic->kappa_closed[n];
            numeric[n] = numerical->energies[n];
        }
        std::sort(closed.begin(), closed.end());
        std::sort(numeric.begin(), numeric.end());
        for (int n = 0; n < n_checked; ++n)
            max_dev = std::max(max_dev, std::abs(closed[n] - numeric[n]));
    }

    Metadata meta = base_metadata(built, tol);
    if (compare) {
        meta["max_deviation"] = qmc::format_double(max_dev);
        meta["compared_range"] = std::to_string(n_checked);
    }
    emit(render(meta, {table}, format), out_path);
    return kExitPass;
}

int cmd_evolve(const std::string& path, const std::string& mode, int from,
               const std::string& init_path, long steps, const std::string& out_path,
               const std::string& format, double tol) {
    const LoadedSpec loaded = load(path);
    const BuiltSystem built = qmc::build_system(loaded.spec, loaded.hash, tol);
    const int m = built.system.chain.size();
    if (init_path.empty() && (from < 0 || from >= m))
        throw qmc::SpecError("--from vertex outside window");

    qmc::evolution::EvolutionResult result;
    if (mode == "classical") {
        qmc::Vector p0;
        if (!init_path.empty()) {
            std::ifstream in(init_path);
            if (!in) throw qmc::SpecError("cannot open init file: " + init_path);
            json arr = json::parse(in);
            if (!arr.is_array() || static_cast<int>(arr.size()) != m)
                throw qmc::SpecError("init state must be an array of " + std::to_string(m) +
                                     " probabilities");
            p0 = arr.get<qmc::Vector>();
            p0 = qmc::Distribution::checked(std::move(p0)).values;
        } else {
            p0 = qmc::Distribution::delta(m, from).values;
        }
        result = qmc::evolution::run_classical(built.system, p0, steps);
    } else if (mode == "quantum") {
        qmc::evolution::QuantumState psi0;
        if (!init_path.empty()) {
            std::ifstream in(init_path);
            if (!in) throw qmc::SpecError("cannot open init file: " + init_path);
            json arr = json::parse(in);
            if (!arr.is_array() || static_cast<int>(arr.size()) != m)
                throw qmc::SpecError("init state must be an array of " + std::to_string(m) +
                                     " amplitudes");
            std::vector<qmc::evolution::Complex> amps(m);
            for (int i = 0; i < m; ++i) {
                const json& e = arr.at(i);
                if (e.is_number())
                    amps[i] = qmc::evolution::Complex(e.get<double>(), 0.0);
                else if (e.is_array() && e.size() == 2)
                    amps[i] =
                        qmc::evolution::Complex(e[0].get<double>(), e[1].get<double>());
                else
                    throw qmc::SpecError("amplitude " + std::to_string(i) +
                                         ": expected number or [re, im]");
            }
            psi0 = qmc::evolution::QuantumState::checked(std::move(amps));
        } else {
            psi0 = qmc::evolution::QuantumState::basis(m, from);
        }
        result = qmc::evolution::run_quantum(built.system, psi0, steps);
    } else {
        throw qmc::SpecError("--mode must be classical or quantum");
    }

    ResultTable table;
    table.name = mode;
    table.columns = {"step", "vertex", "value"};
    for (const auto& step : result.steps)
        for (int x = 0; x < m; ++x)
            table.add_row({static_cast<double>(step.step), static_cast<double>(x),
                           step.values[x]});

    Metadata meta = base_metadata(built, tol);
    meta["mode"] = mode;
    meta["steps"] = std::to_string(steps);
    emit(render(meta, {table}, format), out_path);
    return kExitPass;
}

int cmd_compare(const std::string& path, int from, long steps, const std::string& out_path,
                const std::string& format, double tol) {
    const LoadedSpec loaded = load(path);
    const BuiltSystem built = qmc::build_system(loaded.spec, loaded.hash, tol);
    const int m = built.system.chain.size();
    if (from < 0 || from >= m) throw qmc::SpecError("--from vertex outside window");

    qmc::Vector lta(m);
    for (int x = 0; x < m; ++x) lta[x] = qmc::evolution::long_time_average(built.system, x, from);

    ResultTable distances;
    distances.name = "distances";
    distances.columns = {"step", "tv_classical", "tv_quantum"};
    const qmc::Vector p0 = qmc::Distribution::delta(m, from).values;
    for (long l = 0; l <= steps; ++l) {
        const qmc::Vector p = qmc::evolution::classical_evolve_spectral(built.system, p0, l);
        const qmc::Vector q = qmc::evolution::measurement_distribution(built.system, from, l);
        distances.add_row({static_cast<double>(l),
                           qmc::evolution::total_variation(p, built.system.chain.pi),
                           qmc::evolution::total_variation(q, lta)});
    }

    ResultTable average;
    average.name = "long_time_average";
    average.columns = {"vertex", "value"};
    for (int x = 0; x < m; ++x) average.add_row({static_cast<double>(x), lta[x]});

    Metadata meta = base_metadata(built, tol);
    meta["from"] = std::to_string(from);
    meta["steps"] = std::to_string(steps);
    meta["min_phase_gap"] = qmc::format_double(qmc::evolution::min_phase_gap(built.system));
    emit(render(meta, {distances, average}, format), out_path);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversible Markov chains, their coinless quantum walks, and the five "
                 "solvable families"};
    app.require_subcommand(1);

    std::string spec_path, out_path, init_path;
    std::string format = "csv";
    std::string mode = "classical";
    double tol = 1e-12;
    int from = 0;
    long steps = 16;
    bool compare_flag = false;

    auto add_common = [&](CLI::App* cmd, bool with_output) {
        cmd->add_option("spec", spec_path, "chain spec JSON file")->required();
        cmd->add_option("--tol", tol, "validation tolerance (default 1e-12)");
        if (with_output) {
            cmd->add_option("--out", out_path, "output path (default stdout)");
            cmd->add_option("--format", format, "csv|json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
    };

    CLI::App* validate = app.add_subcommand("validate", "check stochasticity/reversibility");
    add_common(validate, false);

    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues and norm constants");
    add_common(spectrum, true);
    spectrum->add_flag("--compare", compare_flag,
                       "also run the numerical eigensolver and report the deviation");

    CLI::App* evolve = app.add_subcommand("evolve", "classical or quantum evolution");
    add_common(evolve, true);
    evolve->add_option("--mode", mode, "classical|quantum")
        ->check(CLI::IsMember({"classical", "quantum"}));
    evolve->add_option("--from", from, "start vertex (delta/basis state)");
    evolve->add_option("--init", init_path, "JSON file with the initial state");
    evolve->add_option("--steps", steps, "number of steps")->required();

    CLI::App* compare = app.add_subcommand("compare", "classical vs quantum distances");
    add_common(compare, true);
    compare->add_option("--from", from, "start vertex");
    compare->add_option("--steps", steps, "number of steps")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_name() == "CallForHelp" ? kExitPass : kExitUsage;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(spec_path, tol);
        if (app.got_subcommand(spectrum))
            return cmd_spectrum(spec_path, compare_flag, out_path, format, tol);
        if (app.got_subcommand(evolve))
            return cmd_evolve(spec_path, mode, from, init_path, steps, out_path, format, tol);
        if (app.got_subcommand(compare))
            return cmd_compare(spec_path, from, steps, out_path, format, tol);
    } catch (const qmc::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
