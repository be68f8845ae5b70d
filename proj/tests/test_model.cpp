#include <doctest.h>

#include "seqauction/model.hpp"
#include "seqauction/rng.hpp"
#include "seqauction/sequential.hpp"
#include "seqauction/simulator.hpp"
#include "seqauction/two_period.hpp"

using namespace seqauction;

namespace {
ModelParams make(double K, double Sigma0 = 1.0, double sig_mu_sq = 1.0,
                 int N = 2, double p0 = 0.0) {
    ModelParams p;
    p.K = K;
    p.p0 = p0;
    p.Sigma0 = Sigma0;
    p.sigma_mu_sq = sig_mu_sq;
    p.N = N;
    return p;
}
}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("benchmark parameters are accepted") {
    const ModelParams p = make(1.0, 1.0, 1.0, 20);
    const ModelParams out = validate(p);
    CHECK(out.K == 1.0);
    CHECK(out.N == 20);
}

TEST_CASE("K outside the open interval is rejected") {
    CHECK_THROWS_WITH_AS(validate(make(2.0)),
                         doctest::Contains("K out of (0,2)"), ValidationError);
    CHECK_THROWS_AS(validate(make(0.0)), ValidationError);
    CHECK_THROWS_AS(validate(make(-0.5)), ValidationError);
    CHECK_THROWS_AS(validate(make(2.3)), ValidationError);
    try {
        validate(make(2.0));
        FAIL("expected throw");
    } catch (const ValidationError& err) {
        CHECK(err.code() == Errc::OutOfRangeK);
    }
}

TEST_CASE("degenerate variances are rejected") {
    try {
        validate(make(0.5, 0.0));
        FAIL("expected throw");
    } catch (const ValidationError& err) {
        CHECK(err.code() == Errc::NonPositiveVariance);
    }
    CHECK_THROWS_AS(validate(make(0.5, 1.0, 0.0)), ValidationError);
    CHECK_THROWS_AS(validate(make(0.5, -1.0)), ValidationError);
}

TEST_CASE("period count must be positive") {
    try {
        validate(make(1.0, 1.0, 1.0, 0));
        FAIL("expected throw");
    } catch (const ValidationError& err) {
        CHECK(err.code() == Errc::ZeroPeriods);
    }
}

TEST_CASE("validate is idempotent") {
    const ModelParams p = make(1.3, 2.0, 0.7, 5, -1.0);
    const ModelParams once = validate(p);
    const ModelParams twice = validate(once);
    CHECK(once.K == twice.K);
    CHECK(once.p0 == twice.p0);
    CHECK(once.Sigma0 == twice.Sigma0);
    CHECK(once.sigma_mu_sq == twice.sigma_mu_sq);
    CHECK(once.N == twice.N);
}

TEST_CASE("random valid parameters always validate") {
    Xoshiro256pp rng(7);
    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.K = 1e-6 + (2.0 - 2e-6) * rng.uniform01();
        p.p0 = 10.0 * (rng.uniform01() - 0.5);
        p.Sigma0 = 1e-6 + 5.0 * rng.uniform01();
        p.sigma_mu_sq = 1e-6 + 5.0 * rng.uniform01();
        p.N = 1 + static_cast<int>(rng.uniform01() * 40);
        CHECK_NOTHROW(validate(p));
    }
}

TEST_CASE("no-disclosure regime is scoped to two periods") {
    CHECK_NOTHROW(validate_regime(make(0.5), Regime::NoDisclosure));
    CHECK_THROWS_AS(
        validate_regime(make(0.5, 1.0, 1.0, 3), Regime::NoDisclosure),
        ValidationError);
    CHECK_NOTHROW(validate_regime(make(0.5, 1.0, 1.0, 3), Regime::Disclosure));
}

TEST_CASE("regime names round-trip") {
    CHECK(regime_from_string("disclosure") == Regime::Disclosure);
    CHECK(regime_from_string("no-disclosure") == Regime::NoDisclosure);
    CHECK(regime_from_string(regime_name(Regime::NoDisclosure)) ==
          Regime::NoDisclosure);
    CHECK_THROWS_AS(regime_from_string("sometimes"), ValidationError);
}

TEST_CASE("downstream operations reject out-of-range parameters") {
    CHECK_THROWS_AS(solve_sequential(make(2.5, 1.0, 1.0, 4)), ValidationError);
    CHECK_THROWS_AS(solve_no_disclosure(make(0.5, 0.0)), ValidationError);
    CHECK_THROWS_AS(solve_disclosure_two_period(make(0.0)), ValidationError);
    SimulationConfig cfg;
    cfg.params = make(1.0, 1.0, 1.0, 2);
    cfg.n_paths = 0;
    const EquilibriumSolution sol =
        to_equilibrium(solve_disclosure_two_period(cfg.params));
    CHECK_THROWS_AS(simulate(cfg, sol), ValidationError);
}

TEST_SUITE_END();
