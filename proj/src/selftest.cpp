#include "capreq/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "capreq/concave.hpp"
#include "capreq/hedging.hpp"
#include "capreq/instances.hpp"
#include "capreq/lp.hpp"
#include "capreq/risk.hpp"
#include "capreq/rng.hpp"

namespace capreq::selftest {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

/// Per-item verdicts collected into arrays so parallel runs aggregate
/// deterministically.
struct Tally {
    std::vector<char> failed;
    std::vector<double> err;

    explicit Tally(std::size_t n) : failed(n, 0), err(n, 0.0) {}

    void finish(SuiteResult& out) const
    {
        out.total = static_cast<int>(failed.size());
        for (char f : failed) out.failures += f ? 1 : 0;
        for (double e : err) out.max_err = std::max(out.max_err, e);
    }
};

Market b1_market()
{
    FiniteFilteredSpace space = build_space({0.5, 0.5}, {{{0, 1}}, {{0}, {1}}}, {"u", "d"});
    PriceProcess price;
    price.values = {{0.0}, {1.0, -1.0}};
    price.normalized = true;
    return make_market(std::move(space), std::move(price));
}

ScenarioSet b1_scenarios(const Market& m, double floor_a = 1.0, double floor_b = 0.0)
{
    return make_scenario_set(m.space, {{{2.0, 0.0}, floor_a}, {{0.0, 2.0}, floor_b}});
}

TwoFactorModel example_model()
{
    TwoFactorModel model;
    model.mu = 0.1;
    model.sigma1 = 0.3;
    model.sigma2 = 0.4;
    model.steps = 1;
    model.horizon = 1.0;
    model.s0 = 1.0;
    return model;
}

RandomVariable random_vector(std::mt19937_64& rng, std::size_t k)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    RandomVariable x(k);
    for (double& v : x) v = gauss(rng);
    return x;
}

/// One-period filtration: trivial partition, then singletons.
std::vector<std::vector<std::vector<int>>> trivial_two_level(int k)
{
    std::vector<int> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> singles;
    for (int i = 0; i < k; ++i) singles.push_back({i});
    return {{all}, singles};
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n)
{
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (double& v : w) { v = exp1(rng); s += v; }
    for (double& v : w) v /= s;
    return w;
}

/// Exact p=2 oracle: enumerate supports, solve the equality-constrained
/// least squares on each support, keep the best feasible candidate.
RandomVariable qp_nearest_oracle(const RandomVariable& x, const ConvexPolytope& pi,
                                 const FiniteFilteredSpace& space)
{
    const std::size_t n = pi.generators.size();
    const std::size_t k = x.size();
    double best_obj = std::numeric_limits<double>::infinity();
    RandomVariable best_point;

    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> sup;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) sup.push_back(j);
        const std::size_t m = sup.size();
        // KKT of min |x - G w|^2 s.t. sum w = 1 on the support
        Matrix kkt(m + 1, m + 1);
        std::vector<double> rhs(m + 1, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < k; ++i)
                    s += space.probs[i] * pi.generators[sup[a]][i] * pi.generators[sup[b]][i];
                kkt(a, b) = 2.0 * s;
            }
            kkt(a, m) = 1.0;
            kkt(m, a) = 1.0;
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                s += space.probs[i] * pi.generators[sup[a]][i] * x[i];
            rhs[a] = 2.0 * s;
        }
        rhs[m] = 1.0;
        std::vector<double> sol;
        if (!linalg::lu_solve(kkt, rhs, sol, 1e-11)) continue;
        bool feas = true;
        for (std::size_t a = 0; a < m; ++a)
            if (sol[a] < -1e-10) { feas = false; break; }
        if (!feas) continue;
        RandomVariable point(k, 0.0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t i = 0; i < k; ++i) point[i] += sol[a] * pi.generators[sup[a]][i];
        double obj = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double r = x[i] - point[i];
            obj += space.probs[i] * r * r;
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_point = std::move(point);
        }
    }
    return best_point;
}

/// Zooming grid maximizer for the one-step two-driver hedge: densities are
/// parameterized by the split of the fixed up/down masses across the second
/// driver, so the feasible set is the box [0,1.6] x [0,2.4].
double grid_oracle_two_factor(const RandomVariable& claim, double alpha)
{
    const double coef = std::sqrt(2.0 * alpha);
    auto value = [&](double z1, double z3) {
        const double z2 = 1.6 - z1, z4 = 2.4 - z3;
        double ev = 0.25 * (claim[0] * z1 + claim[1] * z2 + claim[2] * z3 + claim[3] * z4);
        double n2 = std::sqrt(0.25 * (z1 * z1 + z2 * z2 + z3 * z3 + z4 * z4));
        return ev - coef * n2;
    };
    double c1 = 0.8, c3 = 1.2, r1 = 0.8, r3 = 1.2;
    double best = -std::numeric_limits<double>::infinity();
    for (int level = 0; level < 10; ++level) {
        double b1 = c1, b3 = c3;
        for (int i = 0; i <= 32; ++i)
            for (int j = 0; j <= 32; ++j) {
                double z1 = std::clamp(c1 - r1 + 2.0 * r1 * i / 32.0, 0.0, 1.6);
                double z3 = std::clamp(c3 - r3 + 2.0 * r3 * j / 32.0, 0.0, 2.4);
                double v = value(z1, z3);
                if (v > best) { best = v; b1 = z1; b3 = z3; }
            }
        c1 = b1; c3 = b3;
        r1 *= 0.15; r3 *= 0.15;
    }
    return best;
}

} // namespace

SuiteResult suite_duality(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "duality";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.duality_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_instance(item_seed(cfg.seed, i));
        CapitalReport primal = min_capital_primal(inst.scen, inst.market);
        SupFloorResult dual = min_capital_dual(inst.scen, inst.market);
        if (primal.status != CapitalStatus::Finite || dual.empty) {
            tally.failed[i] = 1;
            tally.err[i] = std::numeric_limits<double>::infinity();
            return;
        }
        double gap = std::fabs(*primal.primal - dual.value);
        tally.err[i] = gap;
        if (gap > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_nozero(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "nozero";
    Tally tally(static_cast<std::size_t>(cfg.nozero_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_empty_z_instance(item_seed(cfg.seed, i));
        CapitalReport primal = min_capital_primal(inst.scen, inst.market);
        CapitalStatus cls = classify(inst.scen, inst.market);
        if (primal.status != CapitalStatus::UnboundedBelow || cls != CapitalStatus::UnboundedBelow)
            tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_certificate(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "certificate";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.certificate_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_instance(item_seed(cfg.seed, i));
        CapitalReport rep = min_capital(inst.scen, inst.market, inst.seed);
        if (rep.status != CapitalStatus::Finite) {
            tally.failed[i] = 1;
            return;
        }
        double viol = certificate_violation(inst.scen, inst.market, rep.certificate_M,
                                            *rep.primal, cfg.certificate_samples,
                                            item_seed(cfg.seed ^ 0xCE27F1CEULL, i), Exec::Serial);
        tally.err[i] = viol;
        if (viol > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_risk_identity(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "risk_identity";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.identity_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_instance(item_seed(cfg.seed ^ 0x51D0ULL, i));
        auto rng = item_rng(item_seed(cfg.seed ^ 0x51D0ULL, i), 7);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<RandomVariable> densities;
        std::vector<double> penalties;
        for (const auto& g : inst.scen.generators) {
            densities.push_back(g.density);
            penalties.push_back(gauss(rng));
        }
        RandomVariable claim = random_vector(rng, inst.market.space.probs.size());
        RiskSpec spec = make_risk_spec(inst.market.space, std::move(densities),
                                       std::move(penalties), std::move(claim));
        IdentityCheck chk = capital_identity_check(spec, inst.market, tol);
        tally.err[i] = chk.difference;
        if (!chk.pass || !chk.lhs || !chk.rhs) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_geometry(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "geometry";
    const double tol = 1e-10 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.geometry_vectors));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        auto rng = item_rng(cfg.seed ^ 0x6E0ULL, i / 50); // one market per block of 50
        Market market = random_market(rng);
        auto vrng = item_rng(cfg.seed ^ 0x6E1ULL, i);
        const std::size_t k = market.space.probs.size();
        RandomVariable x = random_vector(vrng, k);
        RandomVariable y = random_vector(vrng, k);
        const auto& t = market.projection;

        RandomVariable tx = t.project(x);
        RandomVariable ttx = t.project(tx);
        double idem = 0.0;
        for (std::size_t r = 0; r < k; ++r) idem += market.space.probs[r] * (ttx[r] - tx[r]) * (ttx[r] - tx[r]);
        idem = std::sqrt(idem);

        RandomVariable cx = t.complement(x);
        double pyth = std::fabs(inner(x, x, market.space) - inner(tx, tx, market.space) -
                                inner(cx, cx, market.space));
        double self_adj = std::fabs(inner(tx, y, market.space) - inner(x, t.project(y), market.space));

        double worst = std::max({idem, pyth, self_adj});
        tally.err[i] = worst;
        if (worst > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_nearest_oracle(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "nearest_oracle";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.nearest_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        auto rng = item_rng(cfg.seed ^ 0xA11ULL, i);
        std::uniform_int_distribution<int> kd(2, 6), nd(1, 4);
        const int k = kd(rng);
        FiniteFilteredSpace space = build_space(random_probs(rng, k), trivial_two_level(k));
        ConvexPolytope pi;
        const int n = nd(rng);
        for (int j = 0; j < n; ++j) pi.generators.push_back(random_vector(rng, static_cast<std::size_t>(k)));
        RandomVariable x = random_vector(rng, static_cast<std::size_t>(k));

        RandomVariable got = nearest_point(x, pi, 2.0, space);
        RandomVariable want = qp_nearest_oracle(x, pi, space);
        double diff = 0.0;
        for (int r = 0; r < k; ++r)
            diff += space.probs[static_cast<std::size_t>(r)] *
                    (got[static_cast<std::size_t>(r)] - want[static_cast<std::size_t>(r)]) *
                    (got[static_cast<std::size_t>(r)] - want[static_cast<std::size_t>(r)]);
        diff = std::sqrt(diff);
        tally.err[i] = diff;
        if (diff > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_sunny(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "sunny";
    const double tol = 1e-6 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.sunny_instances));
    std::vector<double> beyond(static_cast<std::size_t>(cfg.sunny_instances), 0.0);
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        auto rng = item_rng(cfg.seed ^ 0x50ULL, i);
        std::uniform_int_distribution<int> kd(2, 6), nd(1, 4);
        std::uniform_real_distribution<double> pd(1.2, 2.0);
        const int k = kd(rng);
        FiniteFilteredSpace space = build_space(random_probs(rng, k), trivial_two_level(k));
        ConvexPolytope pi;
        const int n = nd(rng);
        for (int j = 0; j < n; ++j) pi.generators.push_back(random_vector(rng, static_cast<std::size_t>(k)));
        RandomVariable x = random_vector(rng, static_cast<std::size_t>(k));
        const double p = (i % 3 == 0) ? 2.0 : pd(rng);

        RandomVariable s = nearest_point(x, pi, p, space);
        auto check_alpha = [&](double alpha) {
            RandomVariable xa(x.size());
            for (std::size_t r = 0; r < x.size(); ++r) xa[r] = alpha * x[r] + (1.0 - alpha) * s[r];
            RandomVariable sa = nearest_point(xa, pi, p, space);
            double d = 0.0;
            for (std::size_t r = 0; r < x.size(); ++r)
                d += space.probs[r] * (sa[r] - s[r]) * (sa[r] - s[r]);
            return std::sqrt(d);
        };
        double worst = 0.0;
        for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) worst = std::max(worst, check_alpha(alpha));
        tally.err[i] = worst;
        if (worst > tol) tally.failed[i] = 1;
        // outside the segment the property is observed, not asserted
        beyond[i] = std::max(check_alpha(1.5), check_alpha(2.0));
    });
    tally.finish(res);
    double worst_beyond = 0.0;
    for (double b : beyond) worst_beyond = std::max(worst_beyond, b);
    std::ostringstream os;
    os << "alpha>1 discrepancy observed: " << worst_beyond;
    res.detail = os.str();
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_concavity(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "concavity";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.concavity_triples));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_instance(item_seed(cfg.seed ^ 0xCC4FULL, i / 10));
        auto rng = item_rng(cfg.seed ^ 0xCC50ULL, i);
        const std::size_t n = static_cast<std::size_t>(inst.scen.size());
        std::vector<double> l1 = random_simplex(rng, n), l2 = random_simplex(rng, n);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        const double theta = ud(rng);
        const std::size_t k = inst.market.space.probs.size();
        RandomVariable y1(k, 0.0), y2(k, 0.0), ym(k, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < k; ++r) {
                y1[r] += l1[j] * inst.scen.generators[j].density[r];
                y2[r] += l2[j] * inst.scen.generators[j].density[r];
            }
        for (std::size_t r = 0; r < k; ++r) ym[r] = theta * y1[r] + (1.0 - theta) * y2[r];
        double f1 = f_tilde(y1, inst.scen, inst.market.space);
        double f2 = f_tilde(y2, inst.scen, inst.market.space);
        double fm = f_tilde(ym, inst.scen, inst.market.space);
        double deficit = theta * f1 + (1.0 - theta) * f2 - fm;
        tally.err[i] = std::max(0.0, deficit);
        if (deficit > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_worked_binomial(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "worked_binomial";
    const double tol = 1e-10 * cfg.tol_scale;
    res.total = 1;
    Market market = b1_market();
    ScenarioSet scen = b1_scenarios(market);
    CapitalReport rep = min_capital(scen, market, cfg.seed);
    double err = 0.0;
    bool ok = rep.status == CapitalStatus::Finite && rep.primal && rep.dual && rep.witness;
    if (ok) {
        err = std::max({std::fabs(*rep.primal - 0.5), std::fabs(*rep.dual - 0.5),
                        std::fabs(rep.witness->positions[0][0] - 0.5),
                        std::fabs(rep.certificate_M - 0.5)});
        ok = err <= tol;
    } else {
        err = std::numeric_limits<double>::infinity();
    }
    res.max_err = err;
    res.failures = ok ? 0 : 1;
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_hedging_closed_forms(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "hedging_closed_forms";
    int checks = 0, failures = 0;
    double max_err = 0.0;
    auto expect = [&](double got, double want, double tol) {
        ++checks;
        double err = std::fabs(got - want);
        max_err = std::max(max_err, err);
        if (err > tol) ++failures;
    };

    // two-outcome market: singleton martingale density, price 0.5 - sqrt(2a)
    {
        Market market = b1_market();
        RandomVariable claim{1.0, 0.0};
        for (double alpha : {0.0, 0.02, 0.08}) {
            HedgeProblem prob = make_hedge_problem(claim, 2.0, alpha, 10.0);
            HedgePriceResult r = efficient_hedge_price(prob, market);
            expect(r.price, 0.5 - std::sqrt(2.0 * alpha), 1e-6 * cfg.tol_scale);
        }
    }

    // one-step two-driver market
    {
        Market market = build_two_factor_tree(example_model());
        RandomVariable claim = call_payoff(market, 1.0);
        expect(superhedge_price(claim, market), 0.24, 1e-9 * cfg.tol_scale);
        for (double alpha : {0.0, 0.02, 0.08}) {
            HedgeProblem prob = make_hedge_problem(claim, 2.0, alpha, 10.0);
            HedgePriceResult r = efficient_hedge_price(prob, market);
            double closed = 0.24 - std::sqrt(2.0 * alpha) * std::sqrt(1.04);
            expect(r.price, closed, 1e-4 * cfg.tol_scale);
            expect(r.price, grid_oracle_two_factor(claim, alpha), 1e-4 * cfg.tol_scale);
        }
    }

    res.total = checks;
    res.failures = failures;
    res.max_err = max_err;
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_girsanov(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "girsanov";
    const double tol = 1e-10 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.girsanov_draws));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        auto rng = item_rng(cfg.seed ^ 0x6125ULL, i);
        std::uniform_real_distribution<double> ud(-1.0, 1.0), sd(0.1, 0.6);
        TwoFactorModel model;
        model.sigma1 = sd(rng);
        model.sigma2 = sd(rng);
        model.steps = 1 + static_cast<int>(i % 3);
        model.horizon = 1.0;
        model.s0 = 1.0;
        // drift drawn inside the step-positivity region: the tilt bound
        // |mu| < sigma*/sqrt(dt) and the price bound 1 + mu dt > sigma* sqrt(dt)
        {
            const double sdt = std::sqrt(model.dt());
            const double hi = 0.9 * model.sigma_star() / sdt;
            const double lo =
                std::max(-hi, 0.9 * (model.sigma_star() * sdt - 1.0) / model.dt());
            model.mu = lo + (0.5 + 0.5 * ud(rng)) * (hi - lo);
        }
        Market market = build_two_factor_tree(model);

        const double sdt = std::sqrt(model.dt());
        const double ymax = 0.999 * (1.0 / sdt - std::fabs(model.z_tilt()));
        std::uniform_real_distribution<double> yd(-ymax, ymax);
        std::vector<std::vector<double>> y(static_cast<std::size_t>(model.steps));
        long atoms = 1;
        for (int t = 0; t < model.steps; ++t) {
            y[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(atoms));
            for (double& v : y[static_cast<std::size_t>(t)]) v = yd(rng);
            atoms *= 4;
        }
        RandomVariable density = girsanov_density(model, y);
        check_density(density, market.space);
        double viol = martingale_violation(market.price, density, market.space);
        tally.err[i] = viol;
        if (viol > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_monotonicity(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "monotonicity";
    const double exact_tol = 1e-10 * cfg.tol_scale;
    const double hedge_tol = 1e-6 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.monotonicity_instances) + 1);

    par::for_index(static_cast<std::size_t>(cfg.monotonicity_instances), cfg.mode, [&](std::size_t i) {
        RandomInstance inst = random_instance(item_seed(cfg.seed, i)); // duality battery seeds
        CapitalReport base = min_capital_primal(inst.scen, inst.market);
        if (base.status != CapitalStatus::Finite) { tally.failed[i] = 1; return; }
        double err = 0.0;
        bool bad = false;

        // raising one floor never lowers the capital
        ScenarioSet raised = inst.scen;
        raised.generators[i % raised.generators.size()].floor += 0.3;
        CapitalReport rep_r = min_capital_primal(raised, inst.market);
        if (rep_r.status != CapitalStatus::Finite || *rep_r.primal < *base.primal - exact_tol) bad = true;

        // adding a generator never lowers it
        auto rng = item_rng(item_seed(cfg.seed, i), 11);
        ScenarioSet widened = inst.scen;
        widened.generators.push_back({random_density(rng, inst.market.space), 0.2});
        CapitalReport rep_w = min_capital_primal(widened, inst.market);
        bool w_ok = rep_w.status == CapitalStatus::Finite && *rep_w.primal >= *base.primal - exact_tol;
        if (!w_ok) bad = true;

        // floor translation shifts the capital by exactly the same amount
        const double c = 0.7;
        ScenarioSet shifted = inst.scen;
        for (auto& g : shifted.generators) g.floor += c;
        CapitalReport rep_s = min_capital_primal(shifted, inst.market);
        if (rep_s.status != CapitalStatus::Finite) {
            bad = true;
        } else {
            err = std::fabs(*rep_s.primal - (*base.primal + c));
            if (err > exact_tol) bad = true;
        }

        // acceptable capitals form an upward half-line
        if (!is_acceptable(*base.primal + 0.5, inst.scen, inst.market).first) bad = true;
        if (is_acceptable(*base.primal - 0.5, inst.scen, inst.market).first) bad = true;

        tally.err[i] = err;
        tally.failed[i] = bad ? 1 : 0;
    });

    // hedge-side monotonicity on the worked examples
    {
        const std::size_t slot = static_cast<std::size_t>(cfg.monotonicity_instances);
        bool bad = false;
        Market b1 = b1_market();
        RandomVariable claim{1.0, 0.0};
        HedgeProblem base = make_hedge_problem(claim, 2.0, 0.0, 10.0);
        std::vector<SweepRow> rows = alpha_sweep(base, b1, {0.0, 0.02, 0.05, 0.08}, cfg.mode);
        for (std::size_t r = 1; r < rows.size(); ++r)
            if (rows[r].status != "ok" || rows[r].price > rows[r - 1].price + hedge_tol) bad = true;

        Market two = build_two_factor_tree(example_model());
        RandomVariable call = call_payoff(two, 1.0);
        HedgeProblem tf = make_hedge_problem(call, 2.0, 0.0, 10.0);
        std::vector<SweepRow> rows2 = alpha_sweep(tf, two, {0.0, 0.02, 0.05, 0.08}, cfg.mode);
        for (std::size_t r = 1; r < rows2.size(); ++r)
            if (rows2[r].status != "ok" || rows2[r].price > rows2[r - 1].price + hedge_tol) bad = true;

        // pointwise-larger claim never prices lower
        RandomVariable bigger = call;
        for (double& v : bigger) v += 0.1;
        double p_small = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 10.0), two).price;
        double p_big = efficient_hedge_price(make_hedge_problem(bigger, 2.0, 0.02, 10.0), two).price;
        if (p_big < p_small - hedge_tol) bad = true;

        // loosening the cap never prices lower
        double p_tight = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 1.05), two).price;
        double p_loose = efficient_hedge_price(make_hedge_problem(call, 2.0, 0.02, 10.0), two).price;
        if (p_tight > p_loose + hedge_tol) bad = true;

        tally.failed[slot] = bad ? 1 : 0;
    }

    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

SuiteResult suite_lp(const Config& cfg)
{
    auto t0 = clock_type::now();
    SuiteResult res;
    res.name = "lp_kkt";
    const double tol = 1e-8 * cfg.tol_scale;
    Tally tally(static_cast<std::size_t>(cfg.lp_instances));
    par::for_index(tally.failed.size(), cfg.mode, [&](std::size_t i) {
        auto rng = item_rng(cfg.seed ^ 0x19ULL, i);
        std::uniform_int_distribution<int> md(1, 5), nd(2, 8);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> ud(0.0, 1.0);
        const int m = md(rng);
        const int n = std::max(m + 1, nd(rng));

        LinearProgram lp;
        for (int j = 0; j < n; ++j) lp.add_var(gauss(rng), ud(rng) < 0.3);
        // rhs from a known nonnegative point, so the program is feasible
        std::vector<double> x0(static_cast<std::size_t>(n));
        for (double& v : x0) v = ud(rng);
        for (int r = 0; r < m; ++r) {
            std::map<int, double> coeffs;
            double rhs = 0.0;
            for (int j = 0; j < n; ++j) {
                double a = gauss(rng);
                coeffs[j] = a;
                rhs += a * x0[static_cast<std::size_t>(j)];
            }
            lp.add_eq(coeffs, rhs);
        }
        SolveStatus st = solve_lp(lp);
        if (st.kind == SolveStatus::Kind::Infeasible) {
            tally.failed[i] = 1;
            return;
        }
        if (st.kind == SolveStatus::Kind::Unbounded) return; // legitimate outcome
        double worst = 0.0;
        // primal feasibility
        for (int r = 0; r < lp.num_rows(); ++r) {
            double ax = 0.0;
            for (int j = 0; j < lp.num_vars(); ++j)
                ax += lp.eq_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * st.x[static_cast<std::size_t>(j)];
            worst = std::max(worst, std::fabs(ax - lp.eq_rhs[static_cast<std::size_t>(r)]));
        }
        // strong duality and stationarity
        double by = 0.0;
        for (int r = 0; r < lp.num_rows(); ++r) by += lp.eq_rhs[static_cast<std::size_t>(r)] * st.y[static_cast<std::size_t>(r)];
        worst = std::max(worst, std::fabs(by - st.value));
        for (int j = 0; j < lp.num_vars(); ++j) {
            double rc = lp.objective[static_cast<std::size_t>(j)];
            for (int r = 0; r < lp.num_rows(); ++r)
                rc -= st.y[static_cast<std::size_t>(r)] * lp.eq_rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
            if (lp.free_var[static_cast<std::size_t>(j)])
                worst = std::max(worst, std::fabs(rc));
            else {
                worst = std::max(worst, std::max(0.0, -rc));
                worst = std::max(worst, std::fabs(rc * st.x[static_cast<std::size_t>(j)]));
            }
        }
        tally.err[i] = worst;
        if (worst > tol) tally.failed[i] = 1;
    });
    tally.finish(res);
    res.seconds = elapsed_since(t0);
    return res;
}

std::vector<SuiteResult> run_all(const Config& cfg)
{
    return {
        suite_lp(cfg),
        suite_geometry(cfg),
        suite_nearest_oracle(cfg),
        suite_sunny(cfg),
        suite_concavity(cfg),
        suite_duality(cfg),
        suite_nozero(cfg),
        suite_certificate(cfg),
        suite_risk_identity(cfg),
        suite_worked_binomial(cfg),
        suite_hedging_closed_forms(cfg),
        suite_girsanov(cfg),
        suite_monotonicity(cfg),
    };
}

} // namespace capreq::selftest
