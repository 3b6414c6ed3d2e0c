#include "capreq/risk.hpp"

#include <cmath>
#include <limits>

#include "capreq/lp.hpp"

namespace capreq {

RiskSpec make_risk_spec(const FiniteFilteredSpace& space, std::vector<RandomVariable> densities,
                        std::vector<double> penalties, RandomVariable claim)
{
    if (densities.size() != penalties.size())
        throw Error(Errc::DimensionMismatch, "one penalty per density required");
    for (const auto& z : densities) check_density(z, space);
    if (static_cast<int>(claim.size()) != space.num_outcomes())
        throw Error(Errc::DimensionMismatch, "claim length does not match outcome count");
    return RiskSpec{std::move(densities), std::move(penalties), std::move(claim)};
}

double rho(const RandomVariable& x, const RiskSpec& spec, const FiniteFilteredSpace& space)
{
    if (spec.densities.empty()) throw Error(Errc::EmptySpec, "risk measure needs scenarios");
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.densities.size(); ++i) {
        double v = -inner(spec.densities[i], x, space) + spec.penalties[i];
        worst = std::max(worst, v);
    }
    return worst;
}

RhoGResult rho_g(const RandomVariable& x, const RiskSpec& spec, const Market& market)
{
    if (spec.densities.empty()) throw Error(Errc::EmptySpec, "risk measure needs scenarios");
    const int d = market.subspace.dimension();

    // minimize t subject to t >= <Z_i, xi - X> + h_i over hedge coefficients
    LinearProgram lp;
    int tv = lp.add_var(1.0, true);
    std::vector<int> cv(d);
    for (int j = 0; j < d; ++j) cv[j] = lp.add_var(0.0, true);
    for (std::size_t i = 0; i < spec.densities.size(); ++i) {
        std::map<int, double> coeffs;
        coeffs[tv] = 1.0;
        for (int j = 0; j < d; ++j)
            coeffs[cv[j]] = -inner(spec.densities[i], market.subspace.basis[j], market.space);
        double rhs = spec.penalties[i] - inner(spec.densities[i], x, market.space);
        lp.add_ge(coeffs, rhs);
    }
    SolveStatus st = solve_lp(lp);
    RhoGResult res;
    if (st.kind == SolveStatus::Kind::Unbounded) {
        res.unbounded = true;
        return res;
    }
    if (st.kind == SolveStatus::Kind::Infeasible)
        throw Error(Errc::NumericalBreakdown, "rho_G LP cannot be infeasible");
    res.value = st.x[0];
    std::vector<double> coeffs(d);
    for (int j = 0; j < d; ++j) coeffs[j] = st.x[1 + j];
    res.hedge = strategy_from_coefficients(market, coeffs);
    return res;
}

IdentityCheck capital_identity_check(const RiskSpec& spec, const Market& market, double tol)
{
    std::vector<ScenarioGenerator> gens;
    gens.reserve(spec.densities.size());
    for (std::size_t i = 0; i < spec.densities.size(); ++i)
        gens.push_back({spec.densities[i],
                        spec.penalties[i] - inner(spec.densities[i], spec.claim, market.space)});
    ScenarioSet scen = make_scenario_set(market.space, std::move(gens));

    IdentityCheck chk;
    CapitalReport rep = min_capital_primal(scen, market);
    if (rep.status == CapitalStatus::Finite) chk.lhs = rep.primal;
    RhoGResult rg = rho_g(spec.claim, spec, market);
    if (!rg.unbounded) chk.rhs = rg.value;

    if (chk.lhs && chk.rhs) {
        chk.difference = std::fabs(*chk.lhs - *chk.rhs);
        chk.pass = chk.difference <= tol;
    } else {
        chk.pass = !chk.lhs && !chk.rhs; // unbounded must propagate to both sides
    }
    return chk;
}

} // namespace capreq
