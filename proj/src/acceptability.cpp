#include "capreq/acceptability.hpp"

#include <cmath>
#include <limits>

#include "capreq/lp.hpp"
#include "capreq/rng.hpp"

namespace capreq {

namespace {
constexpr double kDualityTol = 1e-8;
} // namespace

Market make_market(FiniteFilteredSpace space, PriceProcess price)
{
    check_price_shape(price, space);
    AttainableSubspace sub = attainable_basis(space, price);
    ProjectionOperator proj(space, sub);
    return Market{std::move(space), std::move(price), std::move(sub), std::move(proj)};
}

TradingStrategy strategy_from_coefficients(const Market& market, const std::vector<double>& coeffs)
{
    TradingStrategy strat;
    strat.positions.resize(market.space.horizon());
    for (int t = 0; t < market.space.horizon(); ++t)
        strat.positions[t].assign(market.space.filtration[t].size(), 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        auto [t, a] = market.subspace.node[j];
        strat.positions[t][a] += coeffs[j];
    }
    return strat;
}

const char* capital_status_name(CapitalStatus s)
{
    switch (s) {
        case CapitalStatus::Finite: return "Finite";
        case CapitalStatus::UnboundedBelow: return "UnboundedBelow";
        case CapitalStatus::ScenariosEmpty: return "ScenariosEmpty";
    }
    return "?";
}

namespace {

/// Floor constraints <Z_i, x 1 + xi> >= floor_i over hedge coefficients,
/// with x either a fixed number or the first LP variable.
LinearProgram capital_lp(const ScenarioSet& scen, const Market& market, bool x_is_var,
                         double x_fixed)
{
    const int d = market.subspace.dimension();
    LinearProgram lp;
    int xv = -1;
    if (x_is_var) xv = lp.add_var(1.0, true); // minimize x
    std::vector<int> cv(d);
    for (int j = 0; j < d; ++j) cv[j] = lp.add_var(0.0, true);

    for (const auto& gen : scen.generators) {
        double mass = inner(gen.density, RandomVariable(market.space.probs.size(), 1.0),
                            market.space);
        std::map<int, double> coeffs;
        double rhs = gen.floor;
        if (x_is_var)
            coeffs[xv] = mass;
        else
            rhs -= x_fixed * mass;
        for (int j = 0; j < d; ++j)
            coeffs[cv[j]] = inner(gen.density, market.subspace.basis[j], market.space);
        lp.add_ge(coeffs, rhs);
    }
    return lp;
}

std::vector<double> hedge_coeffs_from(const SolveStatus& st, int d, int offset)
{
    std::vector<double> c(d);
    for (int j = 0; j < d; ++j) c[j] = st.x[offset + j];
    return c;
}

} // namespace

std::pair<bool, std::optional<TradingStrategy>>
is_acceptable(double x, const ScenarioSet& scen, const Market& market)
{
    if (scen.generators.empty()) return {true, TradingStrategy{}};
    SolveStatus st = solve_lp(capital_lp(scen, market, false, x));
    if (!st.optimal()) return {false, std::nullopt};
    return {true, strategy_from_coefficients(
                      market, hedge_coeffs_from(st, market.subspace.dimension(), 0))};
}

CapitalReport min_capital_primal(const ScenarioSet& scen, const Market& market)
{
    CapitalReport rep;
    if (scen.generators.empty()) {
        rep.status = CapitalStatus::ScenariosEmpty;
        return rep;
    }
    SolveStatus st = solve_lp(capital_lp(scen, market, true, 0.0));
    if (st.kind == SolveStatus::Kind::Unbounded) {
        rep.status = CapitalStatus::UnboundedBelow;
        return rep;
    }
    if (st.kind == SolveStatus::Kind::Infeasible)
        throw Error(Errc::NumericalBreakdown, "capital LP cannot be infeasible");
    rep.status = CapitalStatus::Finite;
    rep.primal = st.x[0];
    rep.witness = strategy_from_coefficients(
        market, hedge_coeffs_from(st, market.subspace.dimension(), 1));
    return rep;
}

SupFloorResult min_capital_dual(const ScenarioSet& scen, const Market& market)
{
    MartingalePolytope poly = martingale_polytope(scen, market.subspace, market.space);
    return sup_f_tilde_over_Z(poly);
}

CapitalStatus classify(const ScenarioSet& scen, const Market& market)
{
    if (scen.generators.empty()) return CapitalStatus::ScenariosEmpty;
    MartingalePolytope poly = martingale_polytope(scen, market.subspace, market.space);
    return polytope_feasible_point(poly) ? CapitalStatus::Finite : CapitalStatus::UnboundedBelow;
}

double certificate_M(const CapitalReport& report, const Market& market)
{
    if (!report.witness)
        throw Error(Errc::NoWitness, "certificate requires a Finite report with a witness");
    RandomVariable xi = terminal_wealth(0.0, *report.witness, market.price, market.space);
    return l2_norm(xi, market.space);
}

double certificate_violation(const ScenarioSet& scen, const Market& market, double m_value,
                             double x, int samples, std::uint64_t seed, Exec mode)
{
    if (scen.generators.empty()) throw Error(Errc::EmptySet, "scenario set has no generators");
    const std::size_t n = static_cast<std::size_t>(scen.size());
    return par::max_map(static_cast<std::size_t>(samples), mode,
                        -std::numeric_limits<double>::infinity(), [&](std::size_t i) {
        auto rng = item_rng(seed, i);
        std::exponential_distribution<double> exp1(1.0);
        std::vector<double> lambda(n);
        double s = 0.0;
        for (double& v : lambda) { v = exp1(rng); s += v; }
        RandomVariable y(market.space.probs.size(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double w = lambda[j] / s;
            for (std::size_t r = 0; r < y.size(); ++r)
                y[r] += w * scen.generators[j].density[r];
        }
        double ft = f_tilde(y, scen, market.space);
        return ft - x - m_value * market.projection.projected_norm(y);
    });
}

CapitalReport min_capital(const ScenarioSet& scen, const Market& market, std::uint64_t seed)
{
    CapitalReport rep = min_capital_primal(scen, market);
    rep.seed = seed;
    rep.note = "attainable span is closed: G equals its closure in this finite-dimensional market";

    CapitalStatus cls = classify(scen, market);
    if (rep.status == CapitalStatus::ScenariosEmpty) return rep;

    SupFloorResult dual = min_capital_dual(scen, market);
    if (rep.status == CapitalStatus::UnboundedBelow) {
        if (!dual.empty)
            throw Error(Errc::NumericalBreakdown,
                        "primal unbounded but martingale polytope non-empty");
        if (cls != CapitalStatus::UnboundedBelow)
            throw Error(Errc::NumericalBreakdown, "classification disagrees with primal LP");
        return rep;
    }

    // Finite
    if (dual.empty)
        throw Error(Errc::NumericalBreakdown, "primal finite but martingale polytope empty");
    if (cls != CapitalStatus::Finite)
        throw Error(Errc::NumericalBreakdown, "classification disagrees with primal LP");
    rep.dual = dual.value;
    rep.gap = std::fabs(*rep.primal - *rep.dual);
    if (rep.gap > kDualityTol)
        throw Error(Errc::NumericalBreakdown,
                    "duality gap " + std::to_string(rep.gap) + " above tolerance");
    rep.certificate_M = certificate_M(rep, market);
    return rep;
}

} // namespace capreq
