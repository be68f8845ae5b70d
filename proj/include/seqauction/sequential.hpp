#pragma once

#include <Eigen/Core>
#include <vector>

#include "seqauction/model.hpp"
#include "seqauction/two_period.hpp"

namespace seqauction {

/// Dimensionless state of the backward iteration at auction n:
///   lambda_n = a_n sqrt(Sigma_{n-1}) / sigma_mu
///   alpha_n  = b_n sigma_mu / sqrt(Sigma_{n-1})
///   omega_n  = c_n sigma_mu / sqrt(Sigma_{n-1})
/// q and z are the step intermediates computed from (b, c): they are the
/// next-older value coefficients alpha_{n-1}, omega_{n-1} normalized by
/// sqrt(Sigma_{n-1}) instead of sqrt(Sigma_{n-2}). For n = N the generic
/// expressions are 0/0 and q, z hold their analytic limits.
struct NormalizedState {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double q = 0.0;
    double z = 0.0;
};

/// Closed-form boundary of the backward iteration. The generic step is
/// singular at b_N = c_N = 0, so the first step back from the final auction
/// has to use these values instead.
struct BoundarySeed {
    double a_N;     ///< sqrt(K(2-K))/2
    double b_Nm1;   ///< (2-K)^{3/2} / sqrt(2K)
    double c_Nm1;   ///< 4(1-K)/(2-K) * b_Nm1
    double a_Nm1;   ///< (2-K)^2 / (4 b_Nm1)
};

BoundarySeed seed_boundary(double K);

namespace detail {

/// Step intermediates (q_n, z_n) from the normalized state (b_n, c_n).
/// Scalar-generic so the recursion can be cross-checked at higher precision.
template <typename Scalar>
struct StepIntermediates {
    Scalar q, z;
};

template <typename Scalar>
StepIntermediates<Scalar> recursion_intermediates(Scalar K, Scalar b,
                                                  Scalar c) {
    const Scalar u = 2 * b - c;                    // 2 b_n - c_n
    const Scalar w = (2 - K) * b - c;              // (2-K) b_n - c_n
    const Scalar t = 2 * b * K - 2 * b + c;        // -(gamma numerator) * u
    const Scalar K2 = K * K;
    const Scalar K3 = K2 * K;
    const Scalar K4 = K2 * K2;
    const Scalar bhat = (K4 * b * b - t * w * u * u) / (K2 * b * w * u);
    const Scalar f1 = 1 - K4 * b * b / (w * u * u * u);
    const Scalar f2 = 1 - K3 * b / (w * u * u);
    const Scalar theta_hat = t * u / (K2 * b);
    StepIntermediates<Scalar> out;
    out.q = f1 * bhat + b * f2 * f2;
    out.z = (1 - K) * bhat - f1 * theta_hat + c * f2;
    return out;
}

/// Inverts (q_n, z_n) to the older state: both scale by the common factor
/// (1 + K^3 q / ([(2-K)q - z](2q - z)^2))^{1/2}, and a follows from
/// a = K^2 b / (2b - c)^2.
template <typename Scalar>
struct OlderState {
    Scalar a, b, c;
    Scalar radicand;  ///< 1 + K^3 q / D; negative signals a failed step
};

template <typename Scalar>
OlderState<Scalar> invert_step(Scalar K, Scalar q, Scalar z) {
    using std::sqrt;
    const Scalar d = ((2 - K) * q - z) * (2 * q - z) * (2 * q - z);
    OlderState<Scalar> out;
    out.radicand = 1 + K * K * K * q / d;
    if (!(out.radicand > 0)) {
        out.a = out.b = out.c = Scalar(0);
        return out;
    }
    const Scalar factor = sqrt(out.radicand);
    out.b = q * factor;
    out.c = z * factor;
    const Scalar u = 2 * out.b - out.c;
    out.a = K * K * out.b / (u * u);
    return out;
}

}  // namespace detail

/// Backward pass of the dimensionless recursion. Returns states indexed by
/// auction number 1..N (slot 0 unused). Throws NumericError with
/// DenominatorCollapse or NegativeRadicand if the iteration leaves the valid
/// region (the recursion is only proved to stay there numerically).
std::vector<NormalizedState> backward_pass(double K, int N);

/// Equilibrium coefficients of one auction plus the continuation-value
/// coefficients indexed with it (alpha_n multiplies (s - p*_n)^2 in the value
/// of trading from auction n+1 on).
struct PeriodCoefficients {
    double beta = 0.0;
    double theta = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double gamma_prime = 0.0;
    double eta = 0.0;
    double sigma_z_sq = 0.0;
    double Sigma = 0.0;  ///< posterior variance after this auction
    double alpha = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    double delta = 0.0;
};

/// Full per-period coefficient sequence for one regime. Arrays have N+1
/// entries: slot n holds auction n for n = 1..N; slot 0 holds the priors
/// (Sigma(0) = Sigma0) and the ex-ante value coefficients alpha(0), omega(0),
/// phi(0), delta(0). Strategy/pricing slots at index 0 are NaN.
struct EquilibriumSolution {
    ModelParams params;
    Regime regime = Regime::Disclosure;
    Eigen::ArrayXd beta, theta, lambda, gamma, gamma_prime, eta;
    Eigen::ArrayXd sigma_z_sq, Sigma;
    Eigen::ArrayXd alpha, omega, phi, delta;

    int periods() const { return params.N; }
    PeriodCoefficients period(int n) const;
};

/// Forward pass: recovers every coefficient in base units from the
/// backward-pass states. sigma_z_n^2 values in [-1e-12, 0) of the
/// dimensionless scale clamp to 0; anything more negative throws
/// NumericError(NegativeNoiseVariance). Sigma_N is exactly 0.
EquilibriumSolution forward_pass(const std::vector<NormalizedState>& states,
                                 const ModelParams& params);

/// Backward + forward pass for the disclosure equilibrium.
EquilibriumSolution solve_sequential(const ModelParams& params);

/// Repackages a closed-form two-period solution in the sequential layout so
/// analytics and the simulator can consume either regime.
EquilibriumSolution to_equilibrium(const TwoPeriodSolution& sol);

/// Quadratic continuation value alpha (s-p*)^2 + omega s p* + phi s^2 + delta.
double value_function(const PeriodCoefficients& coeffs, double s,
                      double p_star);

/// Same, reading the value coefficients at index idx in 0..N.
double value_function(const EquilibriumSolution& sol, int idx, double s,
                      double p_star);

/// First-order-condition coefficient residuals of the insider's one-period-
/// ahead objective at auction n. For n < N all three vanish at equilibrium
/// (the objective is constant in the trade, licensing the mixed strategy);
/// at n = N the quadratic term is -lambda_N (strictly concave, pure
/// strategy).
struct IndifferenceResiduals {
    double quadratic;    ///< x^2 coefficient: alpha_n eta_n^2 - lambda_n
    double slope_info;   ///< s coefficient: K - 2 alpha_n eta_n + eta_n omega_n
    double slope_prior;  ///< p* coefficient: 2 alpha_n eta_n (1+gamma'_n) - (1+gamma_n)
};

IndifferenceResiduals indifference_residuals(const EquilibriumSolution& sol,
                                             int n);

}  // namespace seqauction
