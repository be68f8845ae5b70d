#include "seqauction/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <thread>

#include "seqauction/rng.hpp"

namespace seqauction {

namespace {

constexpr std::int64_t kBlockSize = 4096;

// Per-period accumulator layout: 7 quantities tracked with sum and sum of
// squares, then the posterior-gap pair, then 6 regression moments.
enum PerPeriodField {
    kInsider = 0,
    kMaker,
    kAbsX,
    kAbsY,
    kAbsMu,
    kVolume,
    kPostGap,  // v - r_n after the update
    kFieldCount
};
constexpr int kRegCount = 6;

struct BlockAccum {
    // [n-1][field][0]=sum, [1]=sum of squares
    std::vector<std::array<std::array<KahanSum, 2>, kFieldCount>> period;
    std::vector<std::array<KahanSum, kRegCount>> reg;
    KahanSum total, total_sq;

    explicit BlockAccum(int N) : period(N), reg(N) {}
};

struct PathDraws {
    NormalSampler normal;
    explicit PathDraws(std::uint64_t master, std::uint64_t index)
        : normal(Xoshiro256pp::substream(master, index)) {}
};

void run_block(const SimulationConfig& cfg, const EquilibriumSolution& sol,
               std::int64_t first, std::int64_t last, BlockAccum& acc) {
    const ModelParams& pm = cfg.params;
    const int N = pm.N;
    const double sig = std::sqrt(pm.sigma_mu_sq);
    const double sqrt_S0 = std::sqrt(pm.Sigma0);
    const bool disclosed = cfg.regime == Regime::Disclosure;

    for (std::int64_t path = first; path < last; ++path) {
        PathDraws draws(cfg.master_seed, static_cast<std::uint64_t>(path));
        const double v = pm.p0 + sqrt_S0 * draws.normal();
        const double s = v;  // market makers' measure identifies the signal
        double ref = pm.p0;  // p*_{n-1} under disclosure, p_{n-1} otherwise
        double total = 0.0;
        for (int n = 1; n <= N; ++n) {
            const double mu = sig * draws.normal();
            const double z = std::sqrt(sol.sigma_z_sq(n)) * draws.normal();
            const double x =
                sol.beta(n) * (1.0 + sol.gamma(n)) * (s - ref) +
                sol.theta(n) * s + z;
            const double y = x + mu;
            const double p =
                ref + sol.gamma(n) * ref + sol.lambda(n) * y;
            const double next_ref =
                disclosed ? ref + sol.gamma_prime(n) * ref + sol.eta(n) * x
                          : p;

            auto& slot = acc.period[static_cast<size_t>(n) - 1];
            auto put = [&](PerPeriodField f, double value) {
                slot[f][0].add(value);
                slot[f][1].add(value * value);
            };
            const double insider = x * (v - p);
            put(kInsider, insider);
            put(kMaker, (p - v) * y);
            put(kAbsX, std::fabs(x));
            put(kAbsY, std::fabs(y));
            put(kAbsMu, std::fabs(mu));
            put(kVolume, 0.5 * (std::fabs(x) + std::fabs(y) + std::fabs(mu)));
            put(kPostGap, v - next_ref);

            auto& rm = acc.reg[static_cast<size_t>(n) - 1];
            const double t = v - ref;
            rm[0].add(ref * ref);
            rm[1].add(ref * y);
            rm[2].add(y * y);
            rm[3].add(ref * t);
            rm[4].add(y * t);
            rm[5].add(t * t);

            total += insider;
            ref = next_ref;
        }
        acc.total.add(total);
        acc.total_sq.add(total * total);
    }
}

double se_from(double sum, double sumsq, std::int64_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    double var = (sumsq - static_cast<double>(n) * mean * mean) /
                 static_cast<double>(n - 1);
    var = std::max(var, 0.0);
    return std::sqrt(var / static_cast<double>(n));
}

}  // namespace

SimulationStats simulate(const SimulationConfig& cfg,
                         const EquilibriumSolution& sol) {
    validate(cfg.params);
    if (cfg.n_paths < 1)
        throw ValidationError(Errc::InsufficientPaths, "n_paths must be >= 1");
    const int N = cfg.params.N;
    const std::int64_t paths = cfg.n_paths;
    const std::int64_t blocks = (paths + kBlockSize - 1) / kBlockSize;

    int workers = cfg.threads;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
        workers = std::min(workers, 8);
    }
    workers = static_cast<int>(
        std::min<std::int64_t>(workers, std::max<std::int64_t>(blocks, 1)));

    std::vector<BlockAccum> partials(static_cast<size_t>(blocks),
                                     BlockAccum(N));
    auto work = [&](int worker) {
        for (std::int64_t bi = worker; bi < blocks; bi += workers) {
            const std::int64_t first = bi * kBlockSize;
            const std::int64_t last = std::min(first + kBlockSize, paths);
            run_block(cfg, sol, first, last, partials[static_cast<size_t>(bi)]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    // fixed-order reduction over blocks
    BlockAccum total(N);
    for (const BlockAccum& part : partials) {
        for (int n = 0; n < N; ++n) {
            for (int f = 0; f < kFieldCount; ++f) {
                total.period[n][f][0].merge(part.period[n][f][0]);
                total.period[n][f][1].merge(part.period[n][f][1]);
            }
            for (int r = 0; r < kRegCount; ++r)
                total.reg[n][r].merge(part.reg[n][r]);
        }
        total.total.merge(part.total);
        total.total_sq.merge(part.total_sq);
    }

    SimulationStats st;
    st.n_paths = paths;
    st.regime = cfg.regime;
    st.params = cfg.params;
    auto zeros = [&] { return Eigen::ArrayXd::Zero(N + 1); };
    st.insider_profit_mean = zeros();
    st.insider_profit_se = zeros();
    st.maker_profit_mean = zeros();
    st.maker_profit_se = zeros();
    st.abs_x_mean = zeros();
    st.abs_x_se = zeros();
    st.abs_y_mean = zeros();
    st.abs_y_se = zeros();
    st.abs_mu_mean = zeros();
    st.abs_mu_se = zeros();
    st.volume_mean = zeros();
    st.volume_se = zeros();
    st.var_v_minus_ref = zeros();
    st.regression.assign(static_cast<size_t>(N) + 1, RegressionMoments{});

    const double dn = static_cast<double>(paths);
    for (int n = 1; n <= N; ++n) {
        const auto& slot = total.period[static_cast<size_t>(n) - 1];
        auto fill = [&](PerPeriodField f, Eigen::ArrayXd& mean,
                        Eigen::ArrayXd& se) {
            mean(n) = slot[f][0].value() / dn;
            se(n) = se_from(slot[f][0].value(), slot[f][1].value(), paths);
        };
        fill(kInsider, st.insider_profit_mean, st.insider_profit_se);
        fill(kMaker, st.maker_profit_mean, st.maker_profit_se);
        fill(kAbsX, st.abs_x_mean, st.abs_x_se);
        fill(kAbsY, st.abs_y_mean, st.abs_y_se);
        fill(kAbsMu, st.abs_mu_mean, st.abs_mu_se);
        fill(kVolume, st.volume_mean, st.volume_se);
        {
            const double sum = slot[kPostGap][0].value();
            const double sumsq = slot[kPostGap][1].value();
            const double mean = sum / dn;
            double var = (sumsq - dn * mean * mean) / (dn - 1.0);
            st.var_v_minus_ref(n) = std::max(var, 0.0);
        }
        auto& rm = st.regression[static_cast<size_t>(n)];
        const auto& src = total.reg[static_cast<size_t>(n) - 1];
        rm.s11 = src[0].value();
        rm.s12 = src[1].value();
        rm.s22 = src[2].value();
        rm.s1t = src[3].value();
        rm.s2t = src[4].value();
        rm.stt = src[5].value();
    }
    st.total_profit_mean = total.total.value() / dn;
    st.total_profit_se = se_from(total.total.value(), total.total_sq.value(), paths);
    return st;
}

std::vector<RegressionEstimate> empirical_regression_check(
    const SimulationStats& stats) {
    if (stats.n_paths < 10000) {
        std::ostringstream os;
        os << "regression check needs at least 1e4 paths, got "
           << stats.n_paths;
        throw ValidationError(Errc::InsufficientPaths, os.str());
    }
    const int N = stats.params.N;
    const double dn = static_cast<double>(stats.n_paths);
    std::vector<RegressionEstimate> out(static_cast<size_t>(N) + 1);
    for (int n = 1; n <= N; ++n) {
        const RegressionMoments& m = stats.regression[static_cast<size_t>(n)];
        RegressionEstimate& est = out[static_cast<size_t>(n)];
        // the reference-price regressor is degenerate when it is identically 0
        const double scale = std::max(1.0, m.s22);
        est.gamma_identified = m.s11 > 1e-14 * scale;
        if (est.gamma_identified) {
            const double det = m.s11 * m.s22 - m.s12 * m.s12;
            est.gamma_hat = (m.s1t * m.s22 - m.s2t * m.s12) / det;
            est.lambda_hat = (m.s2t * m.s11 - m.s1t * m.s12) / det;
            const double rss = std::max(
                m.stt - est.gamma_hat * m.s1t - est.lambda_hat * m.s2t, 0.0);
            const double sigma_sq = rss / (dn - 2.0);
            est.gamma_se = std::sqrt(sigma_sq * m.s22 / det);
            est.lambda_se = std::sqrt(sigma_sq * m.s11 / det);
        } else {
            est.lambda_hat = m.s2t / m.s22;
            const double rss =
                std::max(m.stt - est.lambda_hat * m.s2t, 0.0);
            const double sigma_sq = rss / (dn - 1.0);
            est.lambda_se = std::sqrt(sigma_sq / m.s22);
            est.gamma_hat = 0.0;
            est.gamma_se = 0.0;
        }
    }
    return out;
}

ProbeResult deviation_profit_probe(const EquilibriumSolution& sol, int n,
                                   const Eigen::ArrayXd& override_grid,
                                   const SimulationConfig& cfg) {
    validate(cfg.params);
    if (cfg.regime != Regime::Disclosure)
        throw ValidationError(Errc::UnsupportedRegime,
                              "deviation probe requires the disclosure regime");
    const int N = cfg.params.N;
    if (n < 1 || n > N)
        throw ValidationError(Errc::ZeroPeriods, "probe period out of range");
    if (override_grid.size() < 3)
        throw ValidationError(Errc::InsufficientPaths,
                              "override grid needs at least 3 points");
    {
        const Eigen::Index mid = override_grid.size() / 2;
        const double x0 = override_grid(0);
        const double x1 = override_grid(mid);
        const double x2 = override_grid(override_grid.size() - 1);
        if (x0 == x1 || x1 == x2 || x0 == x2)
            throw ValidationError(
                Errc::InsufficientPaths,
                "override grid endpoints and midpoint must be distinct");
    }
    const ModelParams& pm = cfg.params;
    const double K = pm.K;
    const double sig = std::sqrt(pm.sigma_mu_sq);
    const double sqrt_S0 = std::sqrt(pm.Sigma0);
    const Eigen::Index G = override_grid.size();

    std::vector<KahanSum> payoff_sum(static_cast<size_t>(G));
    std::vector<KahanSum> payoff_sumsq(static_cast<size_t>(G));
    KahanSum slope_sum, slope_sumsq, curv_sum, curv_sumsq;
    KahanSum eq_sum, eq_sumsq, pred_sum, gap_sum, gap_sumsq;

    std::vector<double> cont_mu(static_cast<size_t>(N) + 1);
    std::vector<double> cont_z(static_cast<size_t>(N) + 1);
    std::vector<double> payoffs(static_cast<size_t>(G));

    for (std::int64_t path = 0; path < cfg.n_paths; ++path) {
        PathDraws draws(cfg.master_seed, static_cast<std::uint64_t>(path));
        const double v = pm.p0 + sqrt_S0 * draws.normal();
        const double s = v;
        double ref = pm.p0;
        for (int k = 1; k < n; ++k) {
            const double z = std::sqrt(sol.sigma_z_sq(k)) * draws.normal();
            const double x =
                sol.beta(k) * (1.0 + sol.gamma(k)) * (s - ref) +
                sol.theta(k) * s + z;
            // mu moves p but not p*, and nothing after period k reads p
            draws.normal();
            ref += sol.gamma_prime(k) * ref + sol.eta(k) * x;
        }
        // common random numbers across overrides
        for (int k = n; k <= N; ++k) {
            cont_mu[static_cast<size_t>(k)] = sig * draws.normal();
            cont_z[static_cast<size_t>(k)] =
                std::sqrt(sol.sigma_z_sq(k)) * draws.normal();
        }

        auto continuation = [&](double first_trade) {
            double payoff = 0.0;
            double r = ref;
            for (int k = n; k <= N; ++k) {
                const double x =
                    (k == n) ? first_trade
                             : sol.beta(k) * (1.0 + sol.gamma(k)) * (s - r) +
                                   sol.theta(k) * s +
                                   cont_z[static_cast<size_t>(k)];
                const double y = x + cont_mu[static_cast<size_t>(k)];
                const double p = r + sol.gamma(k) * r + sol.lambda(k) * y;
                payoff += x * (K * s - p);
                r += sol.gamma_prime(k) * r + sol.eta(k) * x;
            }
            return payoff;
        };

        for (Eigen::Index g = 0; g < G; ++g) {
            payoffs[static_cast<size_t>(g)] = continuation(override_grid(g));
            payoff_sum[static_cast<size_t>(g)].add(payoffs[static_cast<size_t>(g)]);
            payoff_sumsq[static_cast<size_t>(g)].add(
                payoffs[static_cast<size_t>(g)] * payoffs[static_cast<size_t>(g)]);
        }

        // the payoff is exactly quadratic in the override, so three grid
        // points identify the per-path slope and curvature
        {
            const double x0 = override_grid(0);
            const double x1 = override_grid(G / 2);
            const double x2 = override_grid(G - 1);
            const double y0 = payoffs[0];
            const double y1 = payoffs[static_cast<size_t>(G / 2)];
            const double y2 = payoffs[static_cast<size_t>(G - 1)];
            const double d01 = (y1 - y0) / (x1 - x0);
            const double d12 = (y2 - y1) / (x2 - x1);
            const double c2 = (d12 - d01) / (x2 - x0);
            const double c1 = d01 - c2 * (x0 + x1);
            slope_sum.add(c1);
            slope_sumsq.add(c1 * c1);
            curv_sum.add(c2);
            curv_sumsq.add(c2 * c2);
        }

        const double eq_trade =
            sol.beta(n) * (1.0 + sol.gamma(n)) * (s - ref) + sol.theta(n) * s;
        const double eq_payoff = continuation(eq_trade);
        const double predicted = value_function(sol, n - 1, s, ref);
        eq_sum.add(eq_payoff);
        eq_sumsq.add(eq_payoff * eq_payoff);
        pred_sum.add(predicted);
        const double gap = eq_payoff - predicted;
        gap_sum.add(gap);
        gap_sumsq.add(gap * gap);
    }

    const double dn = static_cast<double>(cfg.n_paths);
    ProbeResult res;
    res.grid = override_grid;
    res.payoff_mean = Eigen::ArrayXd::Zero(G);
    res.payoff_se = Eigen::ArrayXd::Zero(G);
    for (Eigen::Index g = 0; g < G; ++g) {
        res.payoff_mean(g) = payoff_sum[static_cast<size_t>(g)].value() / dn;
        res.payoff_se(g) =
            se_from(payoff_sum[static_cast<size_t>(g)].value(),
                    payoff_sumsq[static_cast<size_t>(g)].value(), cfg.n_paths);
    }
    res.slope_mean = slope_sum.value() / dn;
    res.slope_se = se_from(slope_sum.value(), slope_sumsq.value(), cfg.n_paths);
    res.curvature_mean = curv_sum.value() / dn;
    res.curvature_se = se_from(curv_sum.value(), curv_sumsq.value(), cfg.n_paths);
    res.eq_payoff_mean = eq_sum.value() / dn;
    res.eq_payoff_se = se_from(eq_sum.value(), eq_sumsq.value(), cfg.n_paths);
    res.value_prediction_mean = pred_sum.value() / dn;
    res.prediction_gap_mean = gap_sum.value() / dn;
    res.prediction_gap_se =
        se_from(gap_sum.value(), gap_sumsq.value(), cfg.n_paths);
    return res;
}

}  // namespace seqauction
