// Command-line front end: ingest market/scenario files, run the engines,
// emit machine-readable reports. Exit codes: 0 success (capital: Finite),
// 1 input/usage error, 2 UnboundedBelow (accept: not acceptable),
// 3 ScenariosEmpty, 4 selftest failure.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capreq/io.hpp"
#include "capreq/risk.hpp"
#include "capreq/selftest.hpp"

namespace {

using capreq::io::json;

int run_capital(const std::string& market_path, const std::string& scen_path,
                const std::string& out_path, std::uint64_t seed, int samples, bool serial)
{
    capreq::Market market = capreq::io::load_market(market_path);
    capreq::ScenarioSet scen = capreq::io::load_scenarios(scen_path, market.space);
    capreq::CapitalReport rep = capreq::min_capital(scen, market, seed);

    json j;
    j["command"] = "capital";
    json body = capreq::io::capital_report_json(rep);
    for (auto& [key, value] : body.items()) j[key] = value;
    if (rep.status == capreq::CapitalStatus::Finite && samples > 0) {
        double viol = capreq::certificate_violation(
            scen, market, rep.certificate_M, *rep.primal, samples, seed,
            serial ? capreq::Exec::Serial : capreq::Exec::Parallel);
        j["certificate_check"] = {{"samples", samples}, {"max_violation", viol}};
    }
    if (!out_path.empty())
        capreq::io::write_json_atomic(out_path, j);
    else
        std::cout << j.dump(2) << "\n";

    switch (rep.status) {
        case capreq::CapitalStatus::Finite: return 0;
        case capreq::CapitalStatus::UnboundedBelow: return 2;
        case capreq::CapitalStatus::ScenariosEmpty: return 3;
    }
    return 1;
}

int run_accept(double x, const std::string& market_path, const std::string& scen_path,
               const std::string& out_path, std::uint64_t seed)
{
    capreq::Market market = capreq::io::load_market(market_path);
    capreq::ScenarioSet scen = capreq::io::load_scenarios(scen_path, market.space);
    auto [ok, witness] = capreq::is_acceptable(x, scen, market);

    json j;
    j["command"] = "accept";
    j["x"] = x;
    j["acceptable"] = ok;
    j["witness"] = witness ? capreq::io::strategy_json(*witness) : json(nullptr);
    j["seed"] = seed;
    if (!out_path.empty())
        capreq::io::write_json_atomic(out_path, j);
    else
        std::cout << j.dump(2) << "\n";
    return ok ? 0 : 2;
}

int run_rho(const std::string& claim_path, const std::string& market_path,
            const std::string& scen_path, const std::string& out_path, std::uint64_t seed)
{
    capreq::Market market = capreq::io::load_market(market_path);
    // generator floors are read as the penalties h(Q) for the risk measure
    capreq::ScenarioSet scen = capreq::io::load_scenarios(scen_path, market.space);
    capreq::RandomVariable claim = capreq::io::load_claim(claim_path, market.space);

    std::vector<capreq::RandomVariable> densities;
    std::vector<double> penalties;
    for (const auto& g : scen.generators) {
        densities.push_back(g.density);
        penalties.push_back(g.floor);
    }
    capreq::RiskSpec spec =
        capreq::make_risk_spec(market.space, std::move(densities), std::move(penalties), claim);

    json j;
    j["command"] = "rho";
    j["rho"] = capreq::rho(claim, spec, market.space);
    capreq::RhoGResult rg = capreq::rho_g(claim, spec, market);
    j["rho_G"] = rg.unbounded ? json("unbounded") : json(rg.value);
    j["hedge"] = rg.hedge ? capreq::io::strategy_json(*rg.hedge) : json(nullptr);
    capreq::IdentityCheck chk = capreq::capital_identity_check(spec, market);
    j["capital_identity"] = {
        {"min_capital", chk.lhs ? json(*chk.lhs) : json("unbounded")},
        {"rho_G", chk.rhs ? json(*chk.rhs) : json("unbounded")},
        {"difference", chk.difference},
        {"pass", chk.pass}};
    j["seed"] = seed;
    if (!out_path.empty())
        capreq::io::write_json_atomic(out_path, j);
    else
        std::cout << j.dump(2) << "\n";
    return rg.unbounded ? 2 : 0;
}

int run_hedge(double mu, double sigma1, double sigma2, int steps, double horizon, double s0,
              double strike, double q, const std::vector<double>& alphas, double cap,
              const std::string& out_path, std::string report_path, std::uint64_t seed,
              bool serial)
{
    capreq::TwoFactorModel model;
    model.mu = mu;
    model.sigma1 = sigma1;
    model.sigma2 = sigma2;
    model.steps = steps;
    model.horizon = horizon;
    model.s0 = s0;
    capreq::Market market = capreq::build_two_factor_tree(model);
    capreq::RandomVariable claim = capreq::call_payoff(market, strike);
    capreq::HedgeProblem base = capreq::make_hedge_problem(claim, q, 0.0, cap);

    std::vector<capreq::SweepRow> rows = capreq::alpha_sweep(
        base, market, alphas, serial ? capreq::Exec::Serial : capreq::Exec::Parallel);

    capreq::HedgePriceResult diag;
    bool have_diag = false;
    for (const auto& row : rows)
        if (row.status == "ok") {
            diag = capreq::efficient_hedge_price(
                capreq::make_hedge_problem(claim, q, row.alpha, cap), market);
            have_diag = true;
            break;
        }

    if (!out_path.empty())
        capreq::io::write_text_atomic(out_path, capreq::io::sweep_csv(rows));
    else
        std::cout << capreq::io::sweep_csv(rows);

    if (report_path.empty() && !out_path.empty()) {
        report_path = out_path;
        auto dot = report_path.find_last_of('.');
        if (dot != std::string::npos) report_path.resize(dot);
        report_path += ".json";
    }
    json j = capreq::io::sweep_report_json(model, base, rows, have_diag ? &diag : nullptr, seed);
    j["command"] = "hedge";
    if (!report_path.empty()) capreq::io::write_json_atomic(report_path, j);
    return 0;
}

int run_selftest(capreq::selftest::Config cfg)
{
    std::vector<capreq::selftest::SuiteResult> results = capreq::selftest::run_all(cfg);
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-4s %-22s %6d checks %4d failed  max_err %.3e  %.2fs%s%s\n",
                    r.passed() ? "ok" : "FAIL", r.name.c_str(), r.total, r.failures, r.max_err,
                    r.seconds, r.detail.empty() ? "" : "  | ", r.detail.c_str());
        all_ok = all_ok && r.passed();
    }
    std::printf("%s (seed %llu)\n", all_ok ? "all suites passed" : "some suites FAILED",
                static_cast<unsigned long long>(cfg.seed));
    return all_ok ? 0 : 4;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"minimal-capital and efficient-hedging engine for finite scenario-tree markets"};
    app.require_subcommand(1);

    std::string market_path, scen_path, claim_path, out_path, report_path;
    std::uint64_t seed = 42;
    int samples = 1000;
    bool serial = false;
    double x = 0.0;

    auto* capital = app.add_subcommand("capital", "minimal acceptable initial capital");
    capital->add_option("--market", market_path, "market JSON file")->required();
    capital->add_option("--scenarios", scen_path, "scenario JSON file")->required();
    capital->add_option("--out", out_path, "report output path (default: stdout)");
    capital->add_option("--seed", seed, "seed recorded in the report");
    capital->add_option("--samples", samples, "certificate check sample count (0 disables)");
    capital->add_flag("--serial", serial, "disable parallel batch kernels");

    auto* accept = app.add_subcommand("accept", "test acceptability of a given capital");
    accept->add_option("--x", x, "initial capital to test")->required();
    accept->add_option("--market", market_path, "market JSON file")->required();
    accept->add_option("--scenarios", scen_path, "scenario JSON file")->required();
    accept->add_option("--out", out_path, "report output path (default: stdout)");
    accept->add_option("--seed", seed, "seed recorded in the report");

    auto* rho_cmd = app.add_subcommand("rho", "risk measure and hedged risk of a claim");
    rho_cmd->add_option("--claim", claim_path, "claim JSON file")->required();
    rho_cmd->add_option("--market", market_path, "market JSON file")->required();
    rho_cmd->add_option("--scenarios", scen_path, "densities with penalties (floor = penalty)")
        ->required();
    rho_cmd->add_option("--out", out_path, "report output path (default: stdout)");
    rho_cmd->add_option("--seed", seed, "seed recorded in the report");

    double mu = 0.1, sigma1 = 0.3, sigma2 = 0.4, horizon = 1.0, s0 = 1.0, strike = 1.0, q = 2.0,
           cap = 10.0;
    int steps = 1;
    std::vector<double> alphas{0.0};
    auto add_hedge_options = [&](CLI::App* cmd) {
        cmd->add_option("--mu", mu, "drift per unit time");
        cmd->add_option("--sigma1", sigma1, "volatility of the first driver");
        cmd->add_option("--sigma2", sigma2, "volatility of the second driver");
        cmd->add_option("--steps", steps, "tree steps");
        cmd->add_option("--horizon", horizon, "total time");
        cmd->add_option("--s0", s0, "initial price");
        cmd->add_option("--strike", strike, "call strike");
        cmd->add_option("--q", q, "shortfall moment order");
        cmd->add_option("--alphas", alphas, "endurance levels")->delimiter(',');
        cmd->add_option("--cap", cap, "density norm cap");
        cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
        cmd->add_option("--report", report_path, "JSON report path (default: CSV path with .json)");
        cmd->add_option("--seed", seed, "seed recorded in the report");
        cmd->add_flag("--serial", serial, "disable parallel batch kernels");
    };
    auto* hedge = app.add_subcommand("hedge", "shortfall-constrained seller's price per alpha");
    add_hedge_options(hedge);
    auto* sweep = app.add_subcommand("sweep", "alias of hedge");
    add_hedge_options(sweep);

    capreq::selftest::Config cfg;
    auto* selftest = app.add_subcommand("selftest", "run the randomized verification battery");
    selftest->add_option("--seed", cfg.seed, "master seed");
    selftest->add_option("--tol-scale", cfg.tol_scale, "tolerance multiplier (0 = exact)");
    selftest->add_option("--duality-n", cfg.duality_instances);
    selftest->add_option("--nozero-n", cfg.nozero_instances);
    selftest->add_option("--certificate-n", cfg.certificate_instances);
    selftest->add_option("--certificate-samples", cfg.certificate_samples);
    selftest->add_option("--identity-n", cfg.identity_instances);
    selftest->add_option("--geometry-n", cfg.geometry_vectors);
    selftest->add_option("--nearest-n", cfg.nearest_instances);
    selftest->add_option("--sunny-n", cfg.sunny_instances);
    selftest->add_option("--concavity-n", cfg.concavity_triples);
    selftest->add_option("--girsanov-n", cfg.girsanov_draws);
    selftest->add_option("--monotonicity-n", cfg.monotonicity_instances);
    selftest->add_option("--lp-n", cfg.lp_instances);
    bool st_serial = false;
    selftest->add_flag("--serial", st_serial, "disable parallel batch kernels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(capital))
            return run_capital(market_path, scen_path, out_path, seed, samples, serial);
        if (app.got_subcommand(accept))
            return run_accept(x, market_path, scen_path, out_path, seed);
        if (app.got_subcommand(rho_cmd))
            return run_rho(claim_path, market_path, scen_path, out_path, seed);
        if (app.got_subcommand(hedge) || app.got_subcommand(sweep))
            return run_hedge(mu, sigma1, sigma2, steps, horizon, s0, strike, q, alphas, cap,
                             out_path, report_path, seed, serial);
        if (app.got_subcommand(selftest)) {
            if (st_serial) cfg.mode = capreq::Exec::Serial;
            return run_selftest(cfg);
        }
    } catch (const capreq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
