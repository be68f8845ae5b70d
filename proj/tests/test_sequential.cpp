#include <doctest.h>

#include <cmath>
#include <vector>

#include "seqauction/rng.hpp"
#include "seqauction/sequential.hpp"

using namespace seqauction;

namespace {

ModelParams make(double K, int N, double p0 = 0.0, double Sigma0 = 1.0,
                 double sig_mu_sq = 1.0) {
    ModelParams p;
    p.K = K;
    p.p0 = p0;
    p.Sigma0 = Sigma0;
    p.sigma_mu_sq = sig_mu_sq;
    p.N = N;
    return p;
}

const double kGrid[] = {0.5, 0.8, 1.0, 1.2, 1.8};

// relative with a unit floor, so structurally-zero coefficients compare sanely
double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_SUITE_BEGIN("sequential");

TEST_CASE("boundary seed closed forms") {
    SUBCASE("K=1") {
        const BoundarySeed s = seed_boundary(1.0);
        CHECK(s.a_N == doctest::Approx(0.5));
        CHECK(s.b_Nm1 == doctest::Approx(0.70710678119).epsilon(1e-10));
        CHECK(s.a_Nm1 == doctest::Approx(0.35355339059).epsilon(1e-10));
        CHECK(s.c_Nm1 == doctest::Approx(0.0));
    }
    SUBCASE("K=0.5") {
        const BoundarySeed s = seed_boundary(0.5);
        CHECK(s.b_Nm1 == doctest::Approx(1.83712).epsilon(1e-5));
        CHECK(s.c_Nm1 == doctest::Approx(2.44949).epsilon(1e-5));
        CHECK(s.a_Nm1 == doctest::Approx(0.30619).epsilon(1e-4));
    }
}

TEST_CASE("seed satisfies the implicit backward relation") {
    // b_{N-1} (1 - K a_{N-1} / ((2-K) b_{N-1} - c_{N-1}))^{1/2} must equal
    // the q-limit stored at the boundary state
    for (double K : {0.2, 0.5, 0.8, 1.0, 1.3, 1.6, 1.9}) {
        const BoundarySeed s = seed_boundary(K);
        const auto states = backward_pass(K, 3);
        const double ratio =
            1.0 - K * s.a_Nm1 / ((2.0 - K) * s.b_Nm1 - s.c_Nm1);
        CHECK(ratio == doctest::Approx(0.5).epsilon(1e-12));
        const double residual = s.b_Nm1 * std::sqrt(ratio) - states[3].q;
        CHECK(std::fabs(residual) < 1e-12);
        const double z_residual = s.c_Nm1 * std::sqrt(ratio) - states[3].z;
        CHECK(std::fabs(z_residual) < 1e-12);
    }
}

TEST_CASE("two-auction backward pass is the seed") {
    const auto states = backward_pass(0.5, 2);
    CHECK(states[1].a == doctest::Approx(0.30619).epsilon(1e-4));
    CHECK(states[1].b == doctest::Approx(1.83712).epsilon(1e-5));
    CHECK(states[2].b == 0.0);
    CHECK(states[2].c == 0.0);
}

TEST_CASE("sequential N=2 equals the closed forms") {
    for (double K : {0.3, 0.5, 0.8, 1.0, 1.2, 1.5, 1.8}) {
        const ModelParams p = make(K, 2, 0.4, 1.7, 0.9);
        const EquilibriumSolution seq = solve_sequential(p);
        const TwoPeriodSolution two = solve_disclosure_two_period(p);
        INFO("K=", K);
        CHECK(rel_diff(seq.lambda(1), two.lambda1) < 1e-10);
        CHECK(rel_diff(seq.lambda(2), two.lambda2) < 1e-10);
        CHECK(rel_diff(seq.beta(1), two.beta1) < 1e-10);
        CHECK(rel_diff(seq.beta(2), two.beta2) < 1e-10);
        CHECK(rel_diff(seq.theta(1), two.theta1) < 1e-10);
        CHECK(rel_diff(seq.theta(2), two.theta2) < 1e-10);
        CHECK(rel_diff(seq.gamma(1), two.gamma1) < 1e-10);
        CHECK(rel_diff(seq.gamma(2), two.gamma2) < 1e-10);
        CHECK(rel_diff(seq.gamma_prime(1), two.gamma1_prime) < 1e-10);
        CHECK(rel_diff(seq.eta(1), two.eta1) < 1e-10);
        CHECK(rel_diff(seq.sigma_z_sq(1), two.sigma_z1_sq) < 1e-10);
        CHECK(rel_diff(seq.Sigma(1), two.Sigma1) < 1e-10);
        CHECK(seq.Sigma(2) == 0.0);
        CHECK(rel_diff(seq.alpha(1), two.alpha1) < 1e-10);
        CHECK(rel_diff(seq.omega(1), two.omega1) < 1e-10);
        CHECK(rel_diff(seq.phi(1), two.phi1) < 1e-10);
        CHECK(rel_diff(seq.alpha(0), two.alpha0) < 1e-10);
        CHECK(rel_diff(seq.omega(0), two.omega0) < 1e-10);
        CHECK(rel_diff(seq.phi(0), two.phi0) < 1e-10);
        CHECK(seq.delta(0) == 0.0);
    }
}

TEST_CASE("rational reduction: heterogeneity terms vanish") {
    const EquilibriumSolution sol = solve_sequential(make(1.0, 12));
    for (int n = 1; n <= 12; ++n) {
        CHECK(std::fabs(sol.theta(n)) < 1e-14);
        CHECK(std::fabs(sol.gamma(n)) < 1e-14);
        CHECK(std::fabs(sol.gamma_prime(n)) < 1e-14);
        CHECK(std::fabs(sol.omega(n)) < 1e-14);
        CHECK(std::fabs(sol.phi(n)) < 1e-12);
    }
}

TEST_CASE("structural invariants on the N=20 grid") {
    for (double K : kGrid) {
        const int N = 20;
        const EquilibriumSolution sol = solve_sequential(make(K, N));
        INFO("K=", K);

        double lam_min = sol.lambda(1), lam_max = sol.lambda(1);
        for (int n = 1; n <= N; ++n) {
            lam_min = std::min(lam_min, sol.lambda(n));
            lam_max = std::max(lam_max, sol.lambda(n));
        }
        CHECK((lam_max - lam_min) / lam_max < 1e-8);

        for (int n = 0; n <= N; ++n)
            CHECK(rel_diff(sol.Sigma(n), 1.0 - double(n) / N) < 1e-8);

        for (int n = 1; n < N; ++n) CHECK(sol.sigma_z_sq(n) >= 0.0);
        CHECK(sol.sigma_z_sq(N) == 0.0);
        for (int n = 0; n <= N; ++n) CHECK(sol.delta(n) == 0.0);

        for (int n = 1; n <= N; ++n) {
            CHECK(rel_diff(sol.gamma(n), -sol.lambda(n) * sol.theta(n)) <
                  1e-12);
            CHECK(rel_diff(sol.gamma_prime(n), -sol.eta(n) * sol.theta(n)) <
                  1e-12);
        }
    }
}

TEST_CASE("market depth shrinks with heterogeneity") {
    const int N = 20;
    auto lam1 = [N](double K) { return solve_sequential(make(K, N)).lambda(1); };
    const double l10 = lam1(1.0), l12 = lam1(1.2), l18 = lam1(1.8),
                 l05 = lam1(0.5);
    CHECK(l10 > l12);
    CHECK(l12 > l18);
    CHECK(l10 > l05);
}

TEST_CASE("one-shot auction uses the terminal forms directly") {
    const ModelParams p = make(1.4, 1, 0.0, 2.0, 0.5);
    const EquilibriumSolution sol = solve_sequential(p);
    const double lam =
        std::sqrt(1.4 * 0.6 * 2.0) / (2.0 * std::sqrt(0.5));
    CHECK(sol.lambda(1) == doctest::Approx(lam).epsilon(1e-14));
    CHECK(sol.beta(1) == doctest::Approx(1.0 / (2.0 * lam)).epsilon(1e-14));
    CHECK(sol.theta(1) == doctest::Approx(0.4 / lam).epsilon(1e-13));
    CHECK(sol.gamma(1) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(sol.sigma_z_sq(1) == 0.0);
    CHECK(sol.Sigma(1) == 0.0);
    CHECK(sol.alpha(0) ==
          doctest::Approx(0.6 * 0.6 / (4.0 * lam)).epsilon(1e-13));
}

TEST_CASE("mid-grid solve stays in the valid region") {
    const EquilibriumSolution sol = solve_sequential(make(1.2, 3));
    for (int n = 1; n <= 3; ++n) CHECK(sol.lambda(n) > 0.0);
    for (int n = 1; n < 3; ++n) CHECK(sol.sigma_z_sq(n) >= 0.0);
}

TEST_CASE("indifference residuals") {
    for (double K : kGrid) {
        for (int N : {2, 5, 20}) {
            const EquilibriumSolution sol = solve_sequential(make(K, N));
            for (int n = 1; n < N; ++n) {
                const IndifferenceResiduals r = indifference_residuals(sol, n);
                INFO("K=", K, " N=", N, " n=", n);
                CHECK(std::fabs(r.quadratic) < 1e-10);
                CHECK(std::fabs(r.slope_info) < 1e-10);
                CHECK(std::fabs(r.slope_prior) < 1e-10);
            }
            const IndifferenceResiduals last = indifference_residuals(sol, N);
            CHECK(last.quadratic ==
                  doctest::Approx(-sol.lambda(N)).epsilon(1e-14));
            CHECK(last.quadratic < 0.0);
        }
    }
}

TEST_CASE("value recursion consistency") {
    // pushing the forward-pass outputs back through the value recursions
    // must reproduce alpha_{n-1}, omega_{n-1}, phi_{n-1}
    for (double K : {0.5, 1.2, 1.8}) {
        const int N = 20;
        const EquilibriumSolution sol = solve_sequential(make(K, N));
        for (int n = 1; n <= N; ++n) {
            const double bg = sol.beta(n) * (1.0 + sol.gamma(n));
            const double a_prev =
                (1.0 + sol.gamma(n) - sol.lambda(n) * bg) * bg +
                sol.alpha(n) *
                    std::pow(1.0 + sol.gamma_prime(n) - sol.eta(n) * bg, 2);
            const double o_prev =
                bg * (1.0 - K) -
                (1.0 + sol.gamma(n) - sol.lambda(n) * bg) * sol.theta(n) +
                sol.omega(n) *
                    (1.0 - (sol.eta(n) * bg - sol.gamma_prime(n)));
            const double f_prev =
                sol.phi(n) + bg * (K - 1.0) +
                (K + sol.gamma(n) - sol.lambda(n) * bg) * sol.theta(n) +
                sol.omega(n) * (sol.eta(n) * bg - sol.gamma_prime(n));
            INFO("K=", K, " n=", n);
            CHECK(rel_diff(a_prev, sol.alpha(n - 1)) < 1e-10);
            CHECK(rel_diff(o_prev, sol.omega(n - 1)) < 1e-10);
            CHECK(rel_diff(f_prev, sol.phi(n - 1)) < 1e-10);
        }
    }
}

TEST_CASE("value function") {
    SUBCASE("post-terminal coefficients give zero") {
        PeriodCoefficients zero{};
        CHECK(value_function(zero, 1.3, -0.2) == 0.0);
        const EquilibriumSolution sol = solve_sequential(make(0.8, 4));
        CHECK(value_function(sol, 4, 0.7, 0.1) == 0.0);
    }
    SUBCASE("two-auction continuation matches its quadratic form") {
        const ModelParams p = make(0.5, 2);
        const EquilibriumSolution sol = solve_sequential(p);
        const double lam2 = sol.lambda(2);
        for (double s : {-1.0, -0.2, 0.0, 0.7, 1.5}) {
            for (double pst : {-0.8, 0.0, 0.4, 1.1}) {
                const double direct =
                    std::pow(0.5 * s - 1.5 * pst, 2) / (4.0 * lam2);
                CHECK(value_function(sol, 1, s, pst) ==
                      doctest::Approx(direct).epsilon(1e-12));
            }
        }
    }
    SUBCASE("at K=1 the value depends only on the information gap") {
        const EquilibriumSolution sol = solve_sequential(make(1.0, 6));
        for (int idx : {0, 2, 5}) {
            const double base = value_function(sol, idx, 0.9, 0.3);
            const double shifted = value_function(sol, idx, 1.9, 1.3);
            CHECK(base == doctest::Approx(shifted).epsilon(1e-12));
        }
    }
}

TEST_CASE("one-step payoff consistency of the value function") {
    // value at n-1 must equal the expected flow profit of auction n plus the
    // expected continuation, the expectation running over the dissimulation
    // noise and the pricing noise
    for (double K : {0.6, 1.0, 1.5}) {
        const int N = 6;
        const EquilibriumSolution sol = solve_sequential(make(K, N));
        for (int n = 1; n <= N; ++n) {
            for (double s : {-0.7, 0.4, 1.2}) {
                for (double pst : {-0.5, 0.0, 0.8}) {
                    const double bg = sol.beta(n) * (1.0 + sol.gamma(n));
                    const double x_bar = bg * (s - pst) + sol.theta(n) * s;
                    const double sz = sol.sigma_z_sq(n);
                    const double flow =
                        x_bar * (K * s - (1.0 + sol.gamma(n)) * pst -
                                 sol.lambda(n) * x_bar) -
                        sol.lambda(n) * sz;
                    const double p_bar =
                        (1.0 + sol.gamma_prime(n)) * pst + sol.eta(n) * x_bar;
                    const double continuation =
                        sol.alpha(n) * (std::pow(s - p_bar, 2) +
                                        sol.eta(n) * sol.eta(n) * sz) +
                        sol.omega(n) * s * p_bar + sol.phi(n) * s * s +
                        sol.delta(n);
                    const double lhs = value_function(sol, n - 1, s, pst);
                    INFO("K=", K, " n=", n, " s=", s, " p*=", pst);
                    CHECK(lhs ==
                          doctest::Approx(flow + continuation).epsilon(1e-8));
                }
            }
        }
    }
}

TEST_CASE("backward recursion is stable against extended precision") {
    const double K = 1.8;
    const int N = 20;
    // replay the recursion in long double from the same seed
    const BoundarySeed seed = seed_boundary(K);
    long double b = seed.b_Nm1, c = seed.c_Nm1;
    std::vector<long double> bs{b}, cs{c};
    for (int n = N - 1; n >= 2; --n) {
        const auto qz = detail::recursion_intermediates<long double>(
            static_cast<long double>(K), b, c);
        const auto older = detail::invert_step<long double>(
            static_cast<long double>(K), qz.q, qz.z);
        b = older.b;
        c = older.c;
        bs.push_back(b);
        cs.push_back(c);
    }
    const auto states = backward_pass(K, N);
    for (int i = 0; i < static_cast<int>(bs.size()); ++i) {
        const int n = N - 1 - i;
        CHECK(rel_diff(states[n].b, static_cast<double>(bs[i])) < 1e-12);
        CHECK(rel_diff(states[n].c, static_cast<double>(cs[i])) < 1e-12);
    }
}

TEST_CASE("backward pass input validation") {
    CHECK_THROWS_AS(backward_pass(2.0, 5), ValidationError);
    CHECK_THROWS_AS(backward_pass(1.0, 0), ValidationError);
}

TEST_CASE("invariants hold at randomly drawn parameters") {
    Xoshiro256pp rng(20230412);
    for (int trial = 0; trial < 60; ++trial) {
        ModelParams p;
        p.K = 0.05 + 1.9 * rng.uniform01();
        p.p0 = 4.0 * (rng.uniform01() - 0.5);
        p.Sigma0 = 0.1 + 4.0 * rng.uniform01();
        p.sigma_mu_sq = 0.1 + 4.0 * rng.uniform01();
        p.N = 1 + static_cast<int>(rng.uniform01() * 24);
        INFO("K=", p.K, " N=", p.N, " Sigma0=", p.Sigma0, " sig_mu_sq=",
             p.sigma_mu_sq);
        const EquilibriumSolution sol = solve_sequential(p);
        double prev = p.Sigma0;
        for (int n = 1; n <= p.N; ++n) {
            CHECK(sol.lambda(n) > 0.0);
            CHECK(sol.sigma_z_sq(n) >= 0.0);
            CHECK(sol.Sigma(n) >= 0.0);
            CHECK(sol.Sigma(n) < prev);
            prev = sol.Sigma(n);
            CHECK(rel_diff(sol.gamma(n), -sol.lambda(n) * sol.theta(n)) <
                  1e-12);
            CHECK(rel_diff(sol.gamma_prime(n), -sol.eta(n) * sol.theta(n)) <
                  1e-12);
            CHECK(sol.delta(n) == 0.0);
            if (n < p.N) {
                const IndifferenceResiduals r = indifference_residuals(sol, n);
                CHECK(std::fabs(r.quadratic) < 1e-9);
                CHECK(std::fabs(r.slope_info) < 1e-9);
                CHECK(std::fabs(r.slope_prior) < 1e-9);
            }
        }
        CHECK(sol.Sigma(p.N) == 0.0);
        CHECK(sol.sigma_z_sq(p.N) == 0.0);
    }
}

TEST_SUITE_END();
