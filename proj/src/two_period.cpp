#include "seqauction/two_period.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace seqauction {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double cubic(double K, double m) {
    const double u = 2.0 - K;
    return ((u * u * u * m - 4.0 * u) * m - 4.0 * u) * m + 8.0;
}

}  // namespace

CubicRoot solve_cubic_m(double K) {
    double lo = 0.0;
    double hi = 2.0 / (2.0 - K);
    double flo = cubic(K, lo);
    double fhi = cubic(K, hi);
    if (!(flo > 0.0 && fhi < 0.0)) {
        std::ostringstream os;
        os << "cubic has no sign change on (0, 2/(2-K)) at K=" << K;
        throw NumericError(Errc::NoSignChange, os.str());
    }
    // f(lo) > 0 > f(hi); bisect until the bracket is at machine width.
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cubic(K, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    CubicRoot root;
    root.m = 0.5 * (lo + hi);
    root.residual = cubic(K, root.m);
    return root;
}

TwoPeriodSolution solve_no_disclosure(const ModelParams& params) {
    validate_regime(params, Regime::NoDisclosure);
    const double K = params.K;
    const double S0 = params.Sigma0;
    const double sig = std::sqrt(params.sigma_mu_sq);
    const double m = solve_cubic_m(K).m;
    const double u = 2.0 - K;

    TwoPeriodSolution s;
    s.regime = Regime::NoDisclosure;
    s.params = params;
    s.m = m;

    const double denom = 4.0 - m * u * u;
    s.lambda1 =
        std::sqrt(2.0 * K * u * (2.0 - m * u) * (1.0 - m * (1.0 - K)) * S0) /
        (sig * denom);
    s.lambda2 =
        0.5 * std::sqrt(2.0 * K * u * u * (1.0 - m * (1.0 - K)) * S0 / denom) /
        sig;
    s.beta1 = (2.0 - m * u * u) / (s.lambda1 * denom);
    s.beta2 = 1.0 / (2.0 * s.lambda2);
    s.gamma1 = (1.0 - K) * (1.0 - m * u);
    s.gamma2 = 1.0 - K;
    s.theta1 = -s.gamma1 / s.lambda1;
    s.theta2 = (K - 1.0) / s.lambda2;
    s.Sigma1 = 2.0 * u * (1.0 - m * (1.0 - K)) * S0 / denom;
    s.Sigma2 = u * u * (1.0 - m * (1.0 - K)) * S0 / denom;

    s.alpha1 = u * u / (4.0 * s.lambda2);
    s.omega1 = u * (1.0 - K) / s.lambda2;
    s.phi1 = (K - 1.0) / s.lambda2;
    s.delta1 = 0.0;
    s.alpha0 = (1.0 + s.gamma1) * (1.0 + s.gamma1) /
               (4.0 * s.lambda1 * (1.0 - s.alpha1 * s.lambda1));
    s.omega0 = s.omega1 + u * s.gamma1 / s.lambda1;
    s.phi0 = s.phi1 - s.gamma1 / s.lambda1;
    s.delta0 = s.alpha1 * s.lambda1 * s.lambda1 * params.sigma_mu_sq;

    s.gamma1_prime = kNaN;
    s.eta1 = kNaN;
    s.sigma_z1_sq = kNaN;

    // second-order conditions lambda_n (1 - alpha_n lambda_n) > 0, alpha_2 = 0
    const double so1 = s.lambda1 * (1.0 - s.alpha1 * s.lambda1);
    if (!(so1 > 0.0) || !(s.lambda2 > 0.0)) {
        std::ostringstream os;
        os << "second-order condition failed at K=" << K
           << " (lambda1(1-alpha1*lambda1)=" << so1 << ", lambda2=" << s.lambda2
           << ")";
        throw NumericError(Errc::SecondOrderViolation, os.str());
    }

    const auto [e1, e2] = expected_profit_no_disclosure(s, params);
    s.e_profit1 = e1;
    s.e_profit2 = e2;
    return s;
}

std::pair<double, double> expected_profit_no_disclosure(
    const TwoPeriodSolution& sol, const ModelParams& params) {
    const double S0 = params.Sigma0;
    const double p0sq = params.p0 * params.p0;
    // E[(s-p0)^2] = Sigma0, E[p0 s] = p0^2, E[s^2] = Sigma0 + p0^2
    const double e1 = (sol.alpha0 + sol.phi0) * S0 +
                      (sol.omega0 + sol.phi0) * p0sq + sol.delta0;
    // E[(s-p1)^2] = Sigma1, E[s p1] = E[p1^2] = Sigma0 - Sigma1 + p0^2
    const double e2 = sol.alpha1 * sol.Sigma1 +
                      sol.omega1 * (S0 - sol.Sigma1 + p0sq) +
                      sol.phi1 * (S0 + p0sq) + sol.delta1;
    return {e1, e2};
}

TwoPeriodSolution solve_disclosure_two_period(const ModelParams& params) {
    validate(params);
    if (params.N != 2)
        throw ValidationError(Errc::UnsupportedRegime,
                              "two-period disclosure solver requires N=2");
    const double K = params.K;
    const double S0 = params.Sigma0;
    const double sig = std::sqrt(params.sigma_mu_sq);
    const double u = 2.0 - K;

    TwoPeriodSolution s;
    s.regime = Regime::Disclosure;
    s.params = params;
    s.m = kNaN;

    s.lambda1 = std::sqrt(K * u * S0) / (2.0 * std::sqrt(2.0) * sig);
    s.lambda2 = s.lambda1;
    s.eta1 = std::sqrt(K * S0) / (sig * std::sqrt(2.0 * u));
    s.gamma1 = K - 1.0;
    s.gamma1_prime = 2.0 * (K - 1.0) / u;
    s.gamma2 = 1.0 - K;
    s.beta1 = (3.0 * K - 2.0) * sig / (K * std::sqrt(2.0 * K * u * S0));
    s.beta2 = sig * std::sqrt(2.0 / (u * K * S0));
    s.theta1 = 2.0 * std::sqrt(2.0) * (1.0 - K) * sig / std::sqrt(K * u * S0);
    s.theta2 = -s.theta1;
    s.Sigma1 = 0.5 * S0;
    s.Sigma2 = 0.0;  // the disclosed final trade reveals the signal exactly
    s.sigma_z1_sq = u / (2.0 * K) * params.sigma_mu_sq;

    s.alpha1 = u * u / (4.0 * s.lambda2);
    s.omega1 = u * (1.0 - K) / s.lambda2;
    s.phi1 = (K - 1.0) / s.lambda2;
    s.delta1 = 0.0;
    // step the value coefficients back through auction 1
    const double bg = s.beta1 * (1.0 + s.gamma1);
    s.alpha0 = (1.0 + s.gamma1 - s.lambda1 * bg) * bg +
               s.alpha1 * std::pow(1.0 + s.gamma1_prime - s.eta1 * bg, 2);
    s.omega0 = bg * (1.0 - K) -
               (1.0 + s.gamma1 - s.lambda1 * bg) * s.theta1 +
               s.omega1 * (1.0 - (s.eta1 * bg - s.gamma1_prime));
    s.phi0 = s.phi1 + bg * (K - 1.0) +
             (K + s.gamma1 - s.lambda1 * bg) * s.theta1 +
             s.omega1 * (s.eta1 * bg - s.gamma1_prime);
    s.delta0 = 0.0;

    const double root = std::sqrt(2.0 * K * u);
    const double p0sq = params.p0 * params.p0;
    s.e_profit1 = K * K / root * sig * std::sqrt(S0) +
                  (6.0 * K * K - 10.0 * K + 4.0) / root * sig /
                      std::sqrt(S0) * p0sq;
    s.e_profit2 = (5.0 * K * K - 8.0 * K + 4.0) / (2.0 * root) * sig *
                      std::sqrt(S0) +
                  (2.0 * K - 2.0) * (2.0 * K - 2.0) / root * sig /
                      std::sqrt(S0) * p0sq;
    return s;
}

namespace {

const char* observed_relation(double lhs, double rhs) {
    const double tol =
        1e-12 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    if (std::fabs(lhs - rhs) <= tol) return "==";
    return lhs < rhs ? "<" : ">";
}

ComparisonRow make_row(std::string name, double lhs, double rhs,
                       const std::string& expected) {
    ComparisonRow row;
    row.name = std::move(name);
    row.lhs = lhs;
    row.rhs = rhs;
    row.relation = observed_relation(lhs, rhs);
    row.expected = expected;
    if (expected == "depends") {
        row.satisfied = true;
        row.agrees = true;
    } else {
        row.satisfied = (row.relation == expected);
        row.agrees = row.satisfied;
    }
    return row;
}

}  // namespace

ComparisonReport compare_regimes(const ModelParams& params) {
    validate_regime(params, Regime::NoDisclosure);
    ComparisonReport rep;
    rep.params = params;
    rep.with_disclosure = solve_disclosure_two_period(params);
    rep.without_disclosure = solve_no_disclosure(params);
    const TwoPeriodSolution& w = rep.with_disclosure;
    const TwoPeriodSolution& o = rep.without_disclosure;

    const double K = params.K;
    const double sig = std::sqrt(params.sigma_mu_sq);
    const double rS0 = std::sqrt(params.Sigma0);
    const bool under = K < 1.0;
    const bool rational = observed_relation(K, 1.0)[0] == '=';

    // rational-disclosure benchmark (K = 1 closed forms)
    const double bar_beta1 = sig / (std::sqrt(2.0) * rS0);
    const double bar_beta2 = std::sqrt(2.0) * sig / rS0;
    const double bar_lambda = rS0 / (2.0 * std::sqrt(2.0) * sig);
    const double bar_sigma_z1 = 0.5 * params.sigma_mu_sq;
    const double bar_total_profit = sig * rS0 / std::sqrt(2.0);

    const double b1_total = w.beta1 * (1.0 + w.gamma1) + w.theta1;
    const double b2_total = w.beta2 * (1.0 + w.gamma2) + w.theta2;

    auto dir = [&](const char* lt, const char* gt) {
        return rational ? "==" : (under ? lt : gt);
    };

    std::vector<ComparisonRow>& rows = rep.rows;
    rows.push_back(make_row("intensity1_vs_rational", b1_total, bar_beta1,
                            dir(">", "<")));
    rows.push_back(make_row("intensity2_vs_rational", b2_total, bar_beta2,
                            dir("<", ">")));
    rows.push_back(make_row("lambda_vs_rational", w.lambda1, bar_lambda,
                            rational ? "==" : "<"));
    rows.push_back(make_row("Sigma1_vs_rational", w.Sigma1,
                            0.5 * params.Sigma0, "=="));
    {
        const char* exp = "depends";
        if (rational)
            exp = "==";
        else if (K > 1.0)
            exp = ">";
        else if (K > 2.0 / 3.0)
            exp = "<";
        rows.push_back(
            make_row("total_profit_vs_rational", w.e_profit1,
                     bar_total_profit, exp));
    }
    rows.push_back(make_row("sigma_z1_vs_rational", w.sigma_z1_sq,
                            bar_sigma_z1, dir(">", "<")));

    // disclosure vs no-disclosure at the same K
    rows.push_back(
        make_row("lambda_with_lt_lambda1_without", w.lambda1, o.lambda1, "<"));
    rows.push_back(
        make_row("lambda_with_lt_lambda2_without", w.lambda2, o.lambda2, "<"));
    rows.push_back(make_row("lambda1_without_vs_lambda2_without", o.lambda1,
                            o.lambda2,
                            rational ? "depends" : (under ? "<" : ">")));
    rows.push_back(make_row("beta1_with_vs_without", w.beta1, o.beta1,
                            rational ? "depends" : (under ? "<" : ">")));
    rows.push_back(make_row("beta1_without_sign", o.beta1, 0.0,
                            rational ? "depends" : (under ? "<" : ">")));
    rows.push_back(make_row("beta2_with_gt_without", w.beta2, o.beta2, ">"));
    rows.push_back(make_row("beta2_without_sign", o.beta2, 0.0, ">"));
    rows.push_back(
        make_row("Sigma1_with_lt_without", w.Sigma1, o.Sigma1, "<"));
    rows.push_back(
        make_row("gamma1_with_vs_without", w.gamma1, o.gamma1, dir("<", ">")));
    rows.push_back(
        make_row("gamma1_without_sign", o.gamma1, 0.0, rational ? "==" : "<"));
    rows.push_back(make_row("gamma2_with_eq_without", w.gamma2, o.gamma2, "=="));
    rows.push_back(
        make_row("theta1_with_vs_without", w.theta1, o.theta1, dir(">", "<")));
    // theta1_without is positive on both sides of K=1 (gamma1_without < 0)
    rows.push_back(
        make_row("theta1_without_sign", o.theta1, 0.0, rational ? "==" : ">"));
    rows.push_back(
        make_row("theta2_with_vs_without", w.theta2, o.theta2, dir("<", ">")));
    rows.push_back(
        make_row("theta2_without_sign", o.theta2, 0.0, dir("<", ">")));
    // the first-period increment is negative for all p0 only when K < 2/3
    rows.push_back(make_row("profit1_minus_profit2_with",
                            w.e_profit1 - w.e_profit2, 0.0,
                            rational ? ">"
                                     : (K < 2.0 / 3.0 ? "<" : "depends")));
    rows.push_back(make_row("profit1_minus_profit2_without",
                            o.e_profit1 - o.e_profit2, 0.0,
                            under && !rational ? ">" : "depends"));
    rows.push_back(make_row("profit2_with_vs_without", w.e_profit2,
                            o.e_profit2,
                            under && !rational ? ">" : "depends"));
    return rep;
}

}  // namespace seqauction
