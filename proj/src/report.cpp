#include "seqauction/report.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "seqauction/analytics.hpp"

namespace seqauction {

using ordered_json = nlohmann::ordered_json;

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

namespace {

std::vector<double> to_vector(const Eigen::ArrayXd& arr, int from = 1) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(arr.size()));
    for (Eigen::Index i = from; i < arr.size(); ++i) out.push_back(arr(i));
    return out;
}

ordered_json params_json(const ModelParams& p) {
    return ordered_json{{"K", p.K},
                        {"p0", p.p0},
                        {"Sigma0", p.Sigma0},
                        {"sigma_mu_sq", p.sigma_mu_sq},
                        {"N", p.N}};
}

EquilibriumSolution solve_any(const ModelParams& params, Regime regime) {
    validate_regime(params, regime);
    if (regime == Regime::NoDisclosure)
        return to_equilibrium(solve_no_disclosure(params));
    if (params.N == 2) return to_equilibrium(solve_disclosure_two_period(params));
    return solve_sequential(params);
}

template <typename Fn>
CommandResult guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& err) {
        return {2, "", std::string("error: ") + err.what()};
    } catch (const NumericError& err) {
        return {3, "", std::string("error: ") + err.what()};
    }
}

}  // namespace

std::string solution_csv(const EquilibriumSolution& sol) {
    std::ostringstream os;
    os << "n,beta,theta,lambda,gamma,gamma_prime,eta,sigma_z_sq,Sigma,alpha,"
          "omega,phi,delta\n";
    for (int n = 1; n <= sol.periods(); ++n) {
        os << n;
        for (double value :
             {sol.beta(n), sol.theta(n), sol.lambda(n), sol.gamma(n),
              sol.gamma_prime(n), sol.eta(n), sol.sigma_z_sq(n), sol.Sigma(n),
              sol.alpha(n), sol.omega(n), sol.phi(n), sol.delta(n)})
            os << ',' << format_number(value);
        os << '\n';
    }
    return os.str();
}

CommandResult run_solve(const SolveOptions& opts) {
    return guarded([&]() -> CommandResult {
        const EquilibriumSolution sol = solve_any(opts.params, opts.regime);
        if (!opts.json) return {0, solution_csv(sol), ""};
        ordered_json doc;
        doc["params"] = params_json(opts.params);
        doc["regime"] = regime_name(opts.regime);
        doc["head"] = ordered_json{{"alpha", sol.alpha(0)},
                                   {"omega", sol.omega(0)},
                                   {"phi", sol.phi(0)},
                                   {"delta", sol.delta(0)}};
        auto arr = [&](const Eigen::ArrayXd& a) { return to_vector(a); };
        doc["periods"] = ordered_json{
            {"beta", arr(sol.beta)},          {"theta", arr(sol.theta)},
            {"lambda", arr(sol.lambda)},      {"gamma", arr(sol.gamma)},
            {"gamma_prime", arr(sol.gamma_prime)}, {"eta", arr(sol.eta)},
            {"sigma_z_sq", arr(sol.sigma_z_sq)},   {"Sigma", arr(sol.Sigma)},
            {"alpha", arr(sol.alpha)},        {"omega", arr(sol.omega)},
            {"phi", arr(sol.phi)},            {"delta", arr(sol.delta)}};
        return {0, doc.dump(2) + "\n", ""};
    });
}

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {
        "lambda", "sigma",  "profit",      "noise_var", "beta",
        "theta",  "gamma",  "gamma_prime", "volume"};
    return ids;
}

namespace {

// quantity extractors for the single-value figures
Eigen::ArrayXd figure_series(const std::string& id,
                             const EquilibriumSolution& sol) {
    if (id == "lambda") return sol.lambda;
    if (id == "sigma") return sol.Sigma;
    if (id == "noise_var") return sol.sigma_z_sq;
    if (id == "beta") return sol.beta;
    if (id == "theta") return sol.theta;
    if (id == "gamma") return sol.gamma;
    if (id == "gamma_prime") return sol.gamma_prime;
    if (id == "volume") return expected_volume_series(sol).expected_volume;
    throw ValidationError(Errc::UnsupportedRegime, "unknown figure id " + id);
}

bool figure_has_no_disclosure_series(const std::string& id) {
    // gamma_prime and the dissimulation noise exist only under disclosure
    return id != "gamma_prime" && id != "noise_var";
}

}  // namespace

CommandResult run_figure(const FigureOptions& opts) {
    return guarded([&]() -> CommandResult {
        const std::string& id = opts.figure_id;
        bool known = false;
        for (const std::string& candidate : figure_ids())
            known = known || candidate == id;
        if (!known)
            throw ValidationError(Errc::UnsupportedRegime,
                                  "unknown figure id '" + id + "'");
        if (opts.K_grid.empty())
            throw ValidationError(Errc::OutOfRangeK, "empty K grid");

        const bool with_profit_columns = id == "profit";
        std::ostringstream csv;
        ordered_json rows = ordered_json::array();
        if (with_profit_columns)
            csv << "K,n,hybrid,realized,series\n";
        else
            csv << "K,n,value,series\n";

        auto emit = [&](double K, int n, const std::vector<double>& values,
                        const char* series) {
            csv << format_number(K) << ',' << n;
            for (double value : values) csv << ',' << format_number(value);
            csv << ',' << series << '\n';
            ordered_json row;
            row["K"] = K;
            row["n"] = n;
            if (with_profit_columns) {
                row["hybrid"] = values[0];
                row["realized"] = values[1];
            } else {
                row["value"] = values[0];
            }
            row["series"] = series;
            rows.push_back(row);
        };

        for (double K : opts.K_grid) {
            ModelParams params;
            params.K = K;
            params.p0 = opts.p0;
            params.Sigma0 = opts.Sigma0;
            params.sigma_mu_sq = opts.sigma_mu_sq;
            params.N = opts.N;
            std::vector<std::pair<const char*, EquilibriumSolution>> solutions;
            solutions.emplace_back("disclosure",
                                   solve_any(params, Regime::Disclosure));
            if (params.N == 2 && figure_has_no_disclosure_series(id))
                solutions.emplace_back(
                    "no-disclosure", solve_any(params, Regime::NoDisclosure));
            for (const auto& [series, sol] : solutions) {
                const int first_n = id == "sigma" ? 0 : 1;
                if (with_profit_columns) {
                    const ProfitSeries hybrid =
                        expected_profit_series(sol, ProfitMeasure::Hybrid);
                    const ProfitSeries realized =
                        expected_profit_series(sol, ProfitMeasure::Realized);
                    for (int n = 1; n <= params.N; ++n)
                        emit(K, n,
                             {hybrid.per_period(n), realized.per_period(n)},
                             series);
                } else {
                    const Eigen::ArrayXd values = figure_series(id, sol);
                    for (int n = first_n; n <= params.N; ++n)
                        emit(K, n, {values(n)}, series);
                }
            }
        }
        if (!opts.json) return {0, csv.str(), ""};
        ordered_json doc;
        doc["figure"] = id;
        doc["N"] = opts.N;
        doc["p0"] = opts.p0;
        doc["Sigma0"] = opts.Sigma0;
        doc["sigma_mu_sq"] = opts.sigma_mu_sq;
        doc["rows"] = rows;
        return {0, doc.dump(2) + "\n", ""};
    });
}

CommandResult run_simulate(const SimulateOptions& opts) {
    return guarded([&]() -> CommandResult {
        const SimulationConfig& cfg = opts.config;
        const EquilibriumSolution sol = solve_any(cfg.params, cfg.regime);
        const SimulationStats stats = simulate(cfg, sol);
        const int N = cfg.params.N;

        // check 1: market-maker profit within 3 SE of zero, every period
        bool zero_profit_pass = true;
        for (int n = 1; n <= N; ++n)
            zero_profit_pass =
                zero_profit_pass && std::fabs(stats.maker_profit_mean(n)) <=
                                        3.0 * stats.maker_profit_se(n);

        // check 2: empirical Var(v - r_n) within 2% of Sigma_n (absolute
        // floor once the posterior variance is exactly 0)
        bool sigma_pass = true;
        for (int n = 1; n <= N; ++n) {
            const double target = sol.Sigma(n);
            const double emp = stats.var_v_minus_ref(n);
            if (target > 0.0)
                sigma_pass = sigma_pass && std::fabs(emp - target) <= 0.02 * target;
            else
                sigma_pass = sigma_pass && emp <= 1e-10 * cfg.params.Sigma0;
        }

        // check 3: mean (|x|+|y|+|mu|)/2 within 3 SE of the analytic volume;
        // the half-normal identity is exact only for p0 = 0
        const bool volume_applicable = cfg.params.p0 == 0.0;
        bool volume_pass = true;
        if (volume_applicable) {
            const VolumeSeries vol = expected_volume_series(sol);
            for (int n = 1; n <= N; ++n)
                volume_pass =
                    volume_pass && std::fabs(stats.volume_mean(n) -
                                             vol.expected_volume(n)) <=
                                       3.0 * stats.volume_se(n);
        }
        const bool all_passed =
            zero_profit_pass && sigma_pass && (!volume_applicable || volume_pass);

        ordered_json doc;
        doc["params"] = params_json(cfg.params);
        doc["regime"] = regime_name(cfg.regime);
        doc["n_paths"] = cfg.n_paths;
        doc["seed"] = cfg.master_seed;
        auto arr = [&](const Eigen::ArrayXd& a) { return to_vector(a); };
        doc["stats"] = ordered_json{
            {"insider_profit_mean", arr(stats.insider_profit_mean)},
            {"insider_profit_se", arr(stats.insider_profit_se)},
            {"maker_profit_mean", arr(stats.maker_profit_mean)},
            {"maker_profit_se", arr(stats.maker_profit_se)},
            {"abs_x_mean", arr(stats.abs_x_mean)},
            {"abs_x_se", arr(stats.abs_x_se)},
            {"abs_y_mean", arr(stats.abs_y_mean)},
            {"abs_y_se", arr(stats.abs_y_se)},
            {"abs_mu_mean", arr(stats.abs_mu_mean)},
            {"abs_mu_se", arr(stats.abs_mu_se)},
            {"volume_mean", arr(stats.volume_mean)},
            {"volume_se", arr(stats.volume_se)},
            {"var_v_minus_ref", arr(stats.var_v_minus_ref)},
            {"total_profit_mean", stats.total_profit_mean},
            {"total_profit_se", stats.total_profit_se}};
        if (stats.n_paths >= 10000) {
            ordered_json reg = ordered_json::array();
            const auto estimates = empirical_regression_check(stats);
            for (int n = 1; n <= N; ++n) {
                const RegressionEstimate& est =
                    estimates[static_cast<size_t>(n)];
                ordered_json entry;
                entry["n"] = n;
                entry["lambda_hat"] = est.lambda_hat;
                entry["lambda_se"] = est.lambda_se;
                if (est.gamma_identified) {
                    entry["gamma_hat"] = est.gamma_hat;
                    entry["gamma_se"] = est.gamma_se;
                } else {
                    entry["gamma_hat"] = nullptr;
                    entry["gamma_se"] = nullptr;
                }
                reg.push_back(entry);
            }
            doc["regression"] = reg;
        }
        doc["checks"] = ordered_json{
            {"zero_profit_pass", zero_profit_pass},
            {"sigma_pass", sigma_pass},
            {"volume_pass",
             volume_applicable ? ordered_json(volume_pass) : ordered_json()},
            {"volume_skipped", !volume_applicable}};
        doc["all_passed"] = all_passed;
        return {all_passed ? 0 : 1, doc.dump(2) + "\n", ""};
    });
}

CommandResult run_compare(const CompareOptions& opts) {
    return guarded([&]() -> CommandResult {
        if (opts.params.N != 2)
            throw ValidationError(Errc::UnsupportedRegime,
                                  "compare requires N=2");
        const ComparisonReport rep = compare_regimes(opts.params);
        const TwoPeriodSolution& w = rep.with_disclosure;
        const TwoPeriodSolution& o = rep.without_disclosure;

        const std::vector<std::pair<const char*, std::pair<double, double>>>
            coeffs = {
                {"m", {w.m, o.m}},
                {"lambda1", {w.lambda1, o.lambda1}},
                {"lambda2", {w.lambda2, o.lambda2}},
                {"beta1", {w.beta1, o.beta1}},
                {"beta2", {w.beta2, o.beta2}},
                {"theta1", {w.theta1, o.theta1}},
                {"theta2", {w.theta2, o.theta2}},
                {"gamma1", {w.gamma1, o.gamma1}},
                {"gamma2", {w.gamma2, o.gamma2}},
                {"eta1", {w.eta1, o.eta1}},
                {"gamma1_prime", {w.gamma1_prime, o.gamma1_prime}},
                {"sigma_z1_sq", {w.sigma_z1_sq, o.sigma_z1_sq}},
                {"Sigma1", {w.Sigma1, o.Sigma1}},
                {"Sigma2", {w.Sigma2, o.Sigma2}},
                {"e_profit1", {w.e_profit1, o.e_profit1}},
                {"e_profit2", {w.e_profit2, o.e_profit2}},
            };

        if (!opts.json) {
            std::ostringstream os;
            os << "coefficient,with_disclosure,without_disclosure\n";
            for (const auto& [name, pair] : coeffs)
                os << name << ',' << format_number(pair.first) << ','
                   << format_number(pair.second) << '\n';
            os << '\n';
            os << "name,lhs,rhs,relation,satisfied,expected,agrees\n";
            for (const ComparisonRow& row : rep.rows)
                os << row.name << ',' << format_number(row.lhs) << ','
                   << format_number(row.rhs) << ',' << row.relation << ','
                   << (row.satisfied ? "true" : "false") << ',' << row.expected
                   << ',' << (row.agrees ? "true" : "false") << '\n';
            return {0, os.str(), ""};
        }
        ordered_json doc;
        doc["params"] = params_json(opts.params);
        ordered_json coeff_doc;
        for (const auto& [name, pair] : coeffs)
            coeff_doc[name] = ordered_json{{"with_disclosure", pair.first},
                                           {"without_disclosure", pair.second}};
        doc["coefficients"] = coeff_doc;
        ordered_json rows = ordered_json::array();
        for (const ComparisonRow& row : rep.rows)
            rows.push_back(ordered_json{{"name", row.name},
                                        {"lhs", row.lhs},
                                        {"rhs", row.rhs},
                                        {"relation", row.relation},
                                        {"satisfied", row.satisfied},
                                        {"expected", row.expected},
                                        {"agrees", row.agrees}});
        doc["rows"] = rows;
        return {0, doc.dump(2) + "\n", ""};
    });
}

void apply_config(const nlohmann::json& doc, ModelParams& params,
                  Regime& regime) {
    for (const auto& [key, value] : doc.items()) {
        if (key == "K")
            params.K = value.get<double>();
        else if (key == "p0")
            params.p0 = value.get<double>();
        else if (key == "Sigma0")
            params.Sigma0 = value.get<double>();
        else if (key == "sigma_mu_sq")
            params.sigma_mu_sq = value.get<double>();
        else if (key == "N")
            params.N = value.get<int>();
        else if (key == "regime")
            regime = regime_from_string(value.get<std::string>());
        else
            throw ValidationError(Errc::UnsupportedRegime,
                                  "unknown config key '" + key + "'");
    }
}

}  // namespace seqauction
