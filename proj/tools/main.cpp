#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "seqauction/report.hpp"

namespace {

using seqauction::CommandResult;

struct CommonFlags {
    seqauction::ModelParams params;
    seqauction::Regime regime = seqauction::Regime::Disclosure;
    std::string regime_text = "disclosure";
    std::string config_path;
    std::string out_path;
    bool json = false;
    bool k_set = false, p0_set = false, s0_set = false, smu_set = false,
         n_set = false, regime_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_regime = true) {
    cmd->add_option("--K", flags.params.K, "belief parameter, 0 < K < 2")
        ->each([&](const std::string&) { flags.k_set = true; });
    cmd->add_option("--p0", flags.params.p0, "prior mean price")
        ->each([&](const std::string&) { flags.p0_set = true; });
    cmd->add_option("--Sigma0", flags.params.Sigma0, "prior variance")
        ->each([&](const std::string&) { flags.s0_set = true; });
    cmd->add_option("--sigma-mu-sq", flags.params.sigma_mu_sq,
                    "noise-trade variance per auction")
        ->each([&](const std::string&) { flags.smu_set = true; });
    cmd->add_option("--N", flags.params.N, "number of auctions")
        ->each([&](const std::string&) { flags.n_set = true; });
    if (with_regime)
        cmd->add_option("--regime", flags.regime_text,
                        "disclosure or no-disclosure")
            ->each([&](const std::string&) { flags.regime_set = true; });
    cmd->add_option("--config", flags.config_path,
                    "JSON config file; flags override its values");
    cmd->add_option("--out", flags.out_path, "write output to a file");
    cmd->add_flag("--json", flags.json, "emit JSON instead of CSV");
}

/// Config file first, then explicit flags on top.
int resolve(CommonFlags& flags, std::string& error) {
    seqauction::ModelParams file_params = flags.params;
    seqauction::Regime file_regime = flags.regime;
    try {
        if (!flags.config_path.empty()) {
            std::ifstream in(flags.config_path);
            if (!in) {
                error = "error: cannot open config file " + flags.config_path;
                return 2;
            }
            nlohmann::json doc = nlohmann::json::parse(in);
            seqauction::apply_config(doc, file_params, file_regime);
        }
        if (flags.regime_set)
            flags.regime = seqauction::regime_from_string(flags.regime_text);
        else
            flags.regime = file_regime;
        if (!flags.k_set) flags.params.K = file_params.K;
        if (!flags.p0_set) flags.params.p0 = file_params.p0;
        if (!flags.s0_set) flags.params.Sigma0 = file_params.Sigma0;
        if (!flags.smu_set) flags.params.sigma_mu_sq = file_params.sigma_mu_sq;
        if (!flags.n_set) flags.params.N = file_params.N;
    } catch (const seqauction::ValidationError& err) {
        error = std::string("error: ") + err.what();
        return 2;
    } catch (const nlohmann::json::exception& err) {
        error = std::string("error: bad config JSON: ") + err.what();
        return 2;
    }
    return 0;
}

int finish(const CommandResult& result, const std::string& out_path) {
    if (!result.error.empty()) std::cerr << result.error << '\n';
    if (!result.output.empty()) {
        if (out_path.empty()) {
            std::cout << result.output;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot open output file " << out_path
                          << '\n';
                return 2;
            }
            out << result.output;
        }
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Sequential-auction insider-trading equilibria with heterogeneous "
        "prior beliefs and post-trade disclosure: solvers, analytics, and "
        "Monte Carlo validation"};
    app.require_subcommand(1);

    CommonFlags solve_flags;
    CLI::App* solve = app.add_subcommand(
        "solve", "solve one equilibrium and print per-auction coefficients");
    add_common(solve, solve_flags);

    CommonFlags figure_flags;
    figure_flags.params.N = 20;  // figure defaults follow the N=20 sweeps
    std::string figure_id = "lambda";
    std::vector<double> k_grid;
    CLI::App* figure = app.add_subcommand(
        "figure", "emit long-format CSV data for one figure panel");
    figure->add_option("--figure", figure_id,
                       "one of: lambda sigma profit noise_var beta theta "
                       "gamma gamma_prime volume");
    figure->add_option("--K-grid", k_grid,
                       "belief parameters to sweep (default "
                       "0.5 0.8 1.0 1.2 1.8)");
    add_common(figure, figure_flags, /*with_regime=*/false);

    CommonFlags sim_flags;
    std::int64_t paths = 100000;
    std::uint64_t seed = 0;
    int threads = 0;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo validation run; JSON report with checks");
    simulate->add_option("--paths", paths, "number of simulated paths");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--threads", threads,
                         "worker threads (results do not depend on this)");
    add_common(simulate, sim_flags);

    CommonFlags cmp_flags;
    CLI::App* compare = app.add_subcommand(
        "compare", "two-period regime comparison table (requires N=2)");
    add_common(compare, cmp_flags, /*with_regime=*/false);
    cmp_flags.params.N = 2;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    std::string error;
    if (solve->parsed()) {
        if (resolve(solve_flags, error) != 0) {
            std::cerr << error << '\n';
            return 2;
        }
        return finish(seqauction::run_solve(
                          {solve_flags.params, solve_flags.regime,
                           solve_flags.json}),
                      solve_flags.out_path);
    }
    if (figure->parsed()) {
        if (resolve(figure_flags, error) != 0) {
            std::cerr << error << '\n';
            return 2;
        }
        seqauction::FigureOptions opts;
        opts.figure_id = figure_id;
        if (!k_grid.empty()) opts.K_grid = k_grid;
        opts.N = figure_flags.params.N;
        opts.p0 = figure_flags.params.p0;
        opts.Sigma0 = figure_flags.params.Sigma0;
        opts.sigma_mu_sq = figure_flags.params.sigma_mu_sq;
        opts.json = figure_flags.json;
        return finish(seqauction::run_figure(opts), figure_flags.out_path);
    }
    if (simulate->parsed()) {
        if (resolve(sim_flags, error) != 0) {
            std::cerr << error << '\n';
            return 2;
        }
        seqauction::SimulateOptions opts;
        opts.config.n_paths = paths;
        opts.config.master_seed = seed;
        opts.config.params = sim_flags.params;
        opts.config.regime = sim_flags.regime;
        opts.config.threads = threads;
        return finish(seqauction::run_simulate(opts), sim_flags.out_path);
    }
    if (resolve(cmp_flags, error) != 0) {
        std::cerr << error << '\n';
        return 2;
    }
    return finish(
        seqauction::run_compare({cmp_flags.params, cmp_flags.json}),
        cmp_flags.out_path);
}
