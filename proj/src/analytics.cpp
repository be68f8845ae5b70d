#include "seqauction/analytics.hpp"

#include <cmath>

namespace seqauction {

namespace {

// total information-trade coefficient B_n = beta_n (1 + gamma_n) + theta_n
Eigen::ArrayXd total_intensity(const EquilibriumSolution& sol) {
    return sol.beta * (1.0 + sol.gamma) + sol.theta;
}

Eigen::ArrayXd zero_slot0(Eigen::ArrayXd arr) {
    arr(0) = 0.0;
    return arr;
}

}  // namespace

VolumeSeries expected_volume_series(const EquilibriumSolution& sol) {
    const ModelParams& p = sol.params;
    const int N = p.N;
    const double sig_sq = p.sigma_mu_sq;
    const Eigen::ArrayXd B = total_intensity(sol);

    // E[x_n^2] = B_n^2 Sigma_{n-1} + theta_n^2 (Sigma0 + p0^2 - Sigma_{n-1})
    //            + sigma_z_n^2
    Eigen::ArrayXd xi_sq = Eigen::ArrayXd::Zero(N + 1);
    for (int n = 1; n <= N; ++n) {
        const double prior = sol.Sigma(n - 1);
        const double second_moment = p.Sigma0 + p.p0 * p.p0 - prior;
        const double sz = std::isnan(sol.sigma_z_sq(n)) ? 0.0 : sol.sigma_z_sq(n);
        xi_sq(n) = B(n) * B(n) * prior +
                   sol.theta(n) * sol.theta(n) * second_moment + sz;
    }

    VolumeSeries v;
    v.v_insider = zero_slot0(xi_sq.sqrt());
    v.v_noise = Eigen::ArrayXd::Constant(N + 1, std::sqrt(sig_sq));
    v.v_noise(0) = 0.0;
    v.v_maker = zero_slot0((xi_sq + sig_sq).sqrt());
    v.expected_volume =
        (v.v_insider + v.v_noise + v.v_maker) / std::sqrt(2.0 * M_PI);
    return v;
}

ProfitSeries expected_profit_series(const EquilibriumSolution& sol,
                                    ProfitMeasure measure) {
    const ModelParams& p = sol.params;
    const int N = p.N;
    const double K = p.K;
    const Eigen::ArrayXd B = total_intensity(sol);

    ProfitSeries series;
    series.measure = measure;
    series.per_period = Eigen::ArrayXd::Zero(N + 1);
    for (int n = 1; n <= N; ++n) {
        const double prior = sol.Sigma(n - 1);
        const double sz = std::isnan(sol.sigma_z_sq(n)) ? 0.0 : sol.sigma_z_sq(n);
        double dpi = B(n) * (1.0 - sol.lambda(n) * B(n)) * prior -
                     sol.lambda(n) * sz;
        if (measure == ProfitMeasure::Hybrid) {
            const double second_moment = p.Sigma0 + p.p0 * p.p0 - prior;
            dpi += (K - 1.0) * (B(n) * prior + sol.theta(n) * second_moment);
        }
        series.per_period(n) = dpi;
    }
    series.cumulative = Eigen::ArrayXd::Zero(N + 1);
    for (int n = 1; n <= N; ++n)
        series.cumulative(n) = series.cumulative(n - 1) + series.per_period(n);
    series.total = series.cumulative(N);
    return series;
}

DepthEfficiencySeries depth_efficiency_series(const EquilibriumSolution& sol) {
    DepthEfficiencySeries d;
    d.lambda = sol.lambda;
    d.depth = sol.lambda.inverse();
    d.Sigma = sol.Sigma;
    d.eta_minus_lambda = sol.eta - sol.lambda;
    d.lambda(0) = d.depth(0) = d.eta_minus_lambda(0) = 0.0;
    return d;
}

}  // namespace seqauction
