#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "seqauction/sequential.hpp"

namespace seqauction {

struct SimulationConfig {
    std::int64_t n_paths = 0;
    std::uint64_t master_seed = 0;
    ModelParams params;
    Regime regime = Regime::Disclosure;
    int threads = 0;  ///< 0 = pick from hardware; result is identical either way
};

/// Cross moments for the per-period pricing regression of v - r_{n-1} on
/// (r_{n-1}, y_n), where r is the reference price the market makers update
/// from (p* under disclosure, p otherwise).
struct RegressionMoments {
    double s11 = 0.0, s12 = 0.0, s22 = 0.0;
    double s1t = 0.0, s2t = 0.0, stt = 0.0;
};

/// Monte Carlo aggregates under the market makers' measure (v = s). All
/// per-period arrays are indexed 1..N with slot 0 zero; standard errors are
/// sample-std / sqrt(n_paths). For a fixed master_seed the results are
/// bit-identical regardless of thread count: every path derives its own
/// substream from (master_seed, path index) and block partials are reduced
/// in index order.
struct SimulationStats {
    std::int64_t n_paths = 0;
    Regime regime = Regime::Disclosure;
    ModelParams params;

    Eigen::ArrayXd insider_profit_mean, insider_profit_se;
    Eigen::ArrayXd maker_profit_mean, maker_profit_se;
    Eigen::ArrayXd abs_x_mean, abs_x_se;
    Eigen::ArrayXd abs_y_mean, abs_y_se;
    Eigen::ArrayXd abs_mu_mean, abs_mu_se;
    Eigen::ArrayXd volume_mean, volume_se;  ///< (|x|+|y|+|mu|)/2
    Eigen::ArrayXd var_v_minus_ref;  ///< empirical Var(v - r_n), vs Sigma_n

    double total_profit_mean = 0.0;  ///< sum over n of x_n (v - p_n)
    double total_profit_se = 0.0;

    std::vector<RegressionMoments> regression;  ///< [n] for n = 1..N
};

SimulationStats simulate(const SimulationConfig& config,
                         const EquilibriumSolution& sol);

struct RegressionEstimate {
    double lambda_hat = 0.0, lambda_se = 0.0;
    double gamma_hat = 0.0, gamma_se = 0.0;
    bool gamma_identified = false;  ///< false when r_{n-1} is identically 0
};

/// Recovers (gamma_n, lambda_n) per period by least squares from the stored
/// cross moments. Demands at least 10^4 paths; throws
/// ValidationError(InsufficientPaths) otherwise. When the reference-price
/// regressor is degenerate (p0 = 0 makes r_0 identically zero at n = 1) only
/// lambda is estimated.
std::vector<RegressionEstimate> empirical_regression_check(
    const SimulationStats& stats);

/// Payoff profile of overriding the auction-n trade with each grid value
/// while playing the equilibrium everywhere else, scored under the insider's
/// belief (v read as K s). Per path the profile is exactly quadratic in the
/// override, so slope and curvature are measured path-by-path; at
/// equilibrium the profile is flat for n < N and concave with quadratic
/// coefficient -lambda_N at n = N.
struct ProbeResult {
    Eigen::ArrayXd grid;
    Eigen::ArrayXd payoff_mean, payoff_se;
    double slope_mean = 0.0, slope_se = 0.0;
    double curvature_mean = 0.0, curvature_se = 0.0;
    double eq_payoff_mean = 0.0, eq_payoff_se = 0.0;
    double value_prediction_mean = 0.0;
    double prediction_gap_mean = 0.0, prediction_gap_se = 0.0;
};

ProbeResult deviation_profit_probe(const EquilibriumSolution& sol, int n,
                                   const Eigen::ArrayXd& override_grid,
                                   const SimulationConfig& config);

}  // namespace seqauction
