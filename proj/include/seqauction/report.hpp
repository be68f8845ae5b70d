#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "seqauction/model.hpp"
#include "seqauction/sequential.hpp"
#include "seqauction/simulator.hpp"
#include "seqauction/two_period.hpp"

namespace seqauction {

/// Outcome of one CLI command. exit code contract: 0 success, 1 statistical
/// check failure, 2 usage/validation error, 3 numeric failure.
struct CommandResult {
    int exit_code = 0;
    std::string output;  ///< CSV or JSON payload for stdout
    std::string error;   ///< machine-parsable message for stderr, or empty
};

struct SolveOptions {
    ModelParams params;
    Regime regime = Regime::Disclosure;
    bool json = false;
};

struct FigureOptions {
    std::string figure_id;  ///< lambda|sigma|profit|noise_var|beta|theta|gamma|gamma_prime|volume
    std::vector<double> K_grid = {0.5, 0.8, 1.0, 1.2, 1.8};
    int N = 20;
    double p0 = 0.0;
    double Sigma0 = 1.0;
    double sigma_mu_sq = 1.0;
    bool json = false;
};

struct SimulateOptions {
    SimulationConfig config;
};

struct CompareOptions {
    ModelParams params;
    bool json = false;
};

CommandResult run_solve(const SolveOptions& opts);
CommandResult run_figure(const FigureOptions& opts);
CommandResult run_simulate(const SimulateOptions& opts);
CommandResult run_compare(const CompareOptions& opts);

const std::vector<std::string>& figure_ids();

/// Fixed-format CSV (12 significant digits, LF endings) of a solved
/// equilibrium, one row per auction.
std::string solution_csv(const EquilibriumSolution& sol);

/// Merge of a JSON config document ({"K","p0","Sigma0","sigma_mu_sq","N",
/// "regime"}) into params/regime; unknown keys are rejected.
void apply_config(const nlohmann::json& doc, ModelParams& params,
                  Regime& regime);

/// %.12g rendering used by every CSV emitter.
std::string format_number(double value);

}  // namespace seqauction
