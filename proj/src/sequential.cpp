#include "seqauction/sequential.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace seqauction {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

BoundarySeed seed_boundary(double K) {
    const double u = 2.0 - K;
    BoundarySeed s;
    s.a_N = 0.5 * std::sqrt(K * u);
    s.b_Nm1 = u * std::sqrt(u) / std::sqrt(2.0 * K);
    s.c_Nm1 = 4.0 * (1.0 - K) / u * s.b_Nm1;
    s.a_Nm1 = u * u / (4.0 * s.b_Nm1);
    return s;
}

std::vector<NormalizedState> backward_pass(double K, int N) {
    if (!(K > 0.0 && K < 2.0))
        throw ValidationError(Errc::OutOfRangeK, "K out of (0,2)");
    if (N < 1) throw ValidationError(Errc::ZeroPeriods, "N must be >= 1");

    std::vector<NormalizedState> states(static_cast<size_t>(N) + 1);
    const BoundarySeed seed = seed_boundary(K);

    // Final auction: b_N = c_N = 0 with the analytic limits of (q, z).
    // The q limit equals alpha_{N-1} sqrt(Sigma_{N-1})/sigma_mu, which the
    // boundary forms reduce to (2-K)^2 / (4 a_N).
    NormalizedState& last = states[static_cast<size_t>(N)];
    last.a = seed.a_N;
    last.b = 0.0;
    last.c = 0.0;
    last.q = (2.0 - K) * (2.0 - K) / (4.0 * seed.a_N);
    last.z = 4.0 * (1.0 - K) / (2.0 - K) * last.q;
    if (N == 1) return states;

    NormalizedState& first_back = states[static_cast<size_t>(N) - 1];
    first_back.a = seed.a_Nm1;
    first_back.b = seed.b_Nm1;
    first_back.c = seed.c_Nm1;

    for (int n = N - 1; n >= 1; --n) {
        NormalizedState& cur = states[static_cast<size_t>(n)];
        const double u = 2.0 * cur.b - cur.c;
        const double w = (2.0 - K) * cur.b - cur.c;
        if (!(cur.b > 0.0) || !(u > 0.0) || !(w > 0.0)) {
            std::ostringstream os;
            os << "state denominators collapsed at n=" << n << ", K=" << K
               << " (b=" << cur.b << ", 2b-c=" << u << ", (2-K)b-c=" << w
               << ")";
            throw NumericError(Errc::DenominatorCollapse, os.str());
        }
        const auto qz = detail::recursion_intermediates(K, cur.b, cur.c);
        cur.q = qz.q;
        cur.z = qz.z;
        if (n == 1) break;
        const double dq = (2.0 - K) * qz.q - qz.z;
        const double du = 2.0 * qz.q - qz.z;
        if (!(qz.q > 0.0) || !(dq > 0.0) || !(du > 0.0)) {
            std::ostringstream os;
            os << "step denominators collapsed at n=" << n << ", K=" << K
               << " (q=" << qz.q << ", 2q-z=" << du << ", (2-K)q-z=" << dq
               << ")";
            throw NumericError(Errc::DenominatorCollapse, os.str());
        }
        const auto older = detail::invert_step(K, qz.q, qz.z);
        if (!(older.radicand > 0.0)) {
            std::ostringstream os;
            os << "square-root factor went negative at n=" << n << ", K=" << K
               << " (radicand=" << older.radicand << ")";
            throw NumericError(Errc::NegativeRadicand, os.str());
        }
        NormalizedState& prev = states[static_cast<size_t>(n) - 1];
        prev.a = older.a;
        prev.b = older.b;
        prev.c = older.c;
    }
    return states;
}

EquilibriumSolution forward_pass(const std::vector<NormalizedState>& states,
                                 const ModelParams& params) {
    validate(params);
    const int N = params.N;
    if (states.size() != static_cast<size_t>(N) + 1)
        throw ValidationError(Errc::ZeroPeriods,
                              "states/params period count mismatch");
    const double K = params.K;
    const double sig = std::sqrt(params.sigma_mu_sq);

    EquilibriumSolution sol;
    sol.params = params;
    sol.regime = Regime::Disclosure;
    for (Eigen::ArrayXd* arr :
         {&sol.beta, &sol.theta, &sol.lambda, &sol.gamma, &sol.gamma_prime,
          &sol.eta, &sol.sigma_z_sq, &sol.Sigma, &sol.alpha, &sol.omega,
          &sol.phi, &sol.delta})
        *arr = Eigen::ArrayXd::Zero(N + 1);
    sol.beta(0) = sol.theta(0) = sol.lambda(0) = sol.gamma(0) =
        sol.gamma_prime(0) = sol.eta(0) = sol.sigma_z_sq(0) = kNaN;

    sol.Sigma(0) = params.Sigma0;
    for (int n = 1; n <= N; ++n) {
        const NormalizedState& st = states[static_cast<size_t>(n)];
        const double S = sol.Sigma(n - 1);
        const double rt = std::sqrt(S) / sig;  // sqrt(Sigma_{n-1}) / sigma_mu
        if (n < N) {
            const double b = st.b, c = st.c, a = st.a;
            const double u = 2.0 * b - c;
            const double w = (2.0 - K) * b - c;
            const double t = 2.0 * b * K - 2.0 * b + c;
            const double K2 = K * K, K4 = K2 * K2;
            sol.lambda(n) = a * rt;
            sol.eta(n) = K / u * rt;
            sol.theta(n) = t / (a * u) / rt;
            sol.gamma(n) = -t / u;
            sol.gamma_prime(n) = -t / (K * b);
            sol.beta(n) = (K4 * b * b - t * w * u * u) / (2.0 * K2 * b * w * w) / rt;
            const double sz = K * b / w - K4 * b * b / (w * w * u * u);
            if (sz < -1e-12) {
                std::ostringstream os;
                os << "dissimulation variance went negative at n=" << n
                   << ", K=" << K << " (sigma_z^2/sigma_mu^2=" << sz << ")";
                throw NumericError(Errc::NegativeNoiseVariance, os.str());
            }
            sol.sigma_z_sq(n) = std::max(sz, 0.0) * params.sigma_mu_sq;
            sol.Sigma(n) = (1.0 - K * a / w) * S;
        } else {
            const double lamN = 0.5 * std::sqrt(K * (2.0 - K) * S) / sig;
            sol.lambda(n) = lamN;
            sol.beta(n) = 1.0 / (2.0 * lamN);
            sol.theta(n) = (K - 1.0) / lamN;
            sol.gamma(n) = 1.0 - K;
            sol.eta(n) = 2.0 * lamN / K;
            sol.gamma_prime(n) = 2.0 * (1.0 - K) / K;
            sol.sigma_z_sq(n) = 0.0;
            sol.Sigma(n) = 0.0;
        }
        if (!(sol.lambda(n) > 0.0)) {
            std::ostringstream os;
            os << "price impact lambda_" << n << " is not positive at K=" << K;
            throw NumericError(Errc::SecondOrderViolation, os.str());
        }
        // continuation-value coefficients co-indexed with the state
        sol.alpha(n) = (n < N) ? st.b / rt : 0.0;
        sol.omega(n) = (n < N) ? st.c / rt : 0.0;
    }

    // Head value coefficients from the auction-1 intermediates: q_1 and z_1
    // are alpha_0 and omega_0 normalized by sqrt(Sigma_0).
    const double rt0 = std::sqrt(params.Sigma0) / sig;
    sol.alpha(0) = states[1].q / rt0;
    sol.omega(0) = states[1].z / rt0;

    // phi by its recursion, phi_N = 0; delta stays identically 0.
    for (int n = N; n >= 1; --n) {
        const double bg = sol.beta(n) * (1.0 + sol.gamma(n));
        sol.phi(n - 1) = sol.phi(n) + bg * (K - 1.0) +
                         (K + sol.gamma(n) - sol.lambda(n) * bg) * sol.theta(n) +
                         sol.omega(n) * (sol.eta(n) * bg - sol.gamma_prime(n));
    }
    return sol;
}

EquilibriumSolution solve_sequential(const ModelParams& params) {
    validate(params);
    return forward_pass(backward_pass(params.K, params.N), params);
}

PeriodCoefficients EquilibriumSolution::period(int n) const {
    PeriodCoefficients c;
    c.beta = beta(n);
    c.theta = theta(n);
    c.lambda = lambda(n);
    c.gamma = gamma(n);
    c.gamma_prime = gamma_prime(n);
    c.eta = eta(n);
    c.sigma_z_sq = sigma_z_sq(n);
    c.Sigma = Sigma(n);
    c.alpha = alpha(n);
    c.omega = omega(n);
    c.phi = phi(n);
    c.delta = delta(n);
    return c;
}

EquilibriumSolution to_equilibrium(const TwoPeriodSolution& sol) {
    EquilibriumSolution eq;
    eq.params = sol.params;
    eq.params.N = 2;
    eq.regime = sol.regime;
    for (Eigen::ArrayXd* arr :
         {&eq.beta, &eq.theta, &eq.lambda, &eq.gamma, &eq.gamma_prime, &eq.eta,
          &eq.sigma_z_sq, &eq.Sigma, &eq.alpha, &eq.omega, &eq.phi, &eq.delta})
        *arr = Eigen::ArrayXd::Zero(3);
    eq.beta << kNaN, sol.beta1, sol.beta2;
    eq.theta << kNaN, sol.theta1, sol.theta2;
    eq.lambda << kNaN, sol.lambda1, sol.lambda2;
    eq.gamma << kNaN, sol.gamma1, sol.gamma2;
    eq.Sigma << sol.params.Sigma0, sol.Sigma1, sol.Sigma2;
    eq.alpha << sol.alpha0, sol.alpha1, 0.0;
    eq.omega << sol.omega0, sol.omega1, 0.0;
    eq.phi << sol.phi0, sol.phi1, 0.0;
    eq.delta << sol.delta0, sol.delta1, 0.0;
    if (sol.regime == Regime::Disclosure) {
        const double lam2 = sol.lambda2;
        eq.gamma_prime << kNaN, sol.gamma1_prime, 2.0 * (1.0 - sol.params.K) / sol.params.K;
        eq.eta << kNaN, sol.eta1, 2.0 * lam2 / sol.params.K;
        eq.sigma_z_sq << kNaN, sol.sigma_z1_sq, 0.0;
    } else {
        eq.gamma_prime << kNaN, kNaN, kNaN;
        eq.eta << kNaN, kNaN, kNaN;
        eq.sigma_z_sq << kNaN, 0.0, 0.0;
    }
    return eq;
}

double value_function(const PeriodCoefficients& coeffs, double s,
                      double p_star) {
    const double gap = s - p_star;
    return coeffs.alpha * gap * gap + coeffs.omega * s * p_star +
           coeffs.phi * s * s + coeffs.delta;
}

double value_function(const EquilibriumSolution& sol, int idx, double s,
                      double p_star) {
    const double gap = s - p_star;
    return sol.alpha(idx) * gap * gap + sol.omega(idx) * s * p_star +
           sol.phi(idx) * s * s + sol.delta(idx);
}

IndifferenceResiduals indifference_residuals(const EquilibriumSolution& sol,
                                             int n) {
    const double K = sol.params.K;
    const double al = sol.alpha(n);
    const double om = sol.omega(n);
    const double et = sol.eta(n);
    IndifferenceResiduals r;
    r.quadratic = al * et * et - sol.lambda(n);
    r.slope_info = K - 2.0 * al * et + et * om;
    r.slope_prior =
        2.0 * al * et * (1.0 + sol.gamma_prime(n)) - (1.0 + sol.gamma(n));
    return r;
}

}  // namespace seqauction
