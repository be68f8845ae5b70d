#pragma once

#include <Eigen/Core>

#include "seqauction/sequential.hpp"

namespace seqauction {

/// Per-auction expected-volume decomposition under the market makers'
/// measure. Arrays are indexed 1..N (slot 0 is zero). v_insider and v_maker
/// are the root second moments of the insider trade and the total order
/// flow; with p0 != 0 these carry the mean-squared term, so the half-normal
/// identity behind expected_volume is exact only for p0 = 0.
struct VolumeSeries {
    Eigen::ArrayXd v_insider;        ///< sqrt(E[x_n^2])
    Eigen::ArrayXd v_noise;          ///< sigma_mu, every auction
    Eigen::ArrayXd v_maker;          ///< sqrt(E[y_n^2])
    Eigen::ArrayXd expected_volume;  ///< (V_i + V_l + V_m) / sqrt(2 pi)
};

VolumeSeries expected_volume_series(const EquilibriumSolution& sol);

enum class ProfitMeasure { Hybrid, Realized };

/// Per-auction expected profits of the insider.
///
/// Realized is the market makers' expectation of the realized flow profit
/// x_n (v - p_n); with gamma_n = -lambda_n theta_n every p* term cancels and
/// the increment reduces to B_n (1 - lambda_n B_n) Sigma_{n-1}
/// - lambda_n sigma_z_n^2 with B_n = beta_n (1+gamma_n) + theta_n.
/// Hybrid is the same expectation of the insider's subjective value (the
/// reporting convention behind the printed two-period numbers); it adds
/// (K-1) (B_n Sigma_{n-1} + theta_n (Sigma0 + p0^2 - Sigma_{n-1})).
struct ProfitSeries {
    ProfitMeasure measure = ProfitMeasure::Hybrid;
    Eigen::ArrayXd per_period;  ///< indexed 1..N, slot 0 zero
    Eigen::ArrayXd cumulative;  ///< running sums
    double total = 0.0;
};

ProfitSeries expected_profit_series(const EquilibriumSolution& sol,
                                    ProfitMeasure measure);

/// Inverse-efficiency and depth view of a solution: lambda_n, depth 1/lambda_n,
/// Sigma_n, and the disclosure price-adjustment gap eta_n - lambda_n.
struct DepthEfficiencySeries {
    Eigen::ArrayXd lambda;
    Eigen::ArrayXd depth;
    Eigen::ArrayXd Sigma;
    Eigen::ArrayXd eta_minus_lambda;
};

DepthEfficiencySeries depth_efficiency_series(const EquilibriumSolution& sol);

}  // namespace seqauction
