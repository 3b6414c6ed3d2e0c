#include "capreq/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "capreq/concave.hpp"

namespace capreq {

namespace {
constexpr double kCapBindTol = 1e-6;
const char* kBranchCode[4] = {"uu", "ud", "du", "dd"};
// branch -> sign of (dW1, dW2); first-driver-up branches come first
const int kSign1[4] = {+1, +1, -1, -1};
const int kSign2[4] = {+1, -1, +1, -1};
} // namespace

double TwoFactorModel::sigma_star() const
{
    return std::sqrt(sigma1 * sigma1 + sigma2 * sigma2);
}

Market build_two_factor_tree(const TwoFactorModel& model)
{
    if (!(model.sigma1 > 0.0) || !(model.sigma2 > 0.0))
        throw Error(Errc::StepPositivityViolated, "volatilities must be positive");
    if (model.steps < 1 || !(model.horizon > 0.0) || !(model.s0 > 0.0))
        throw Error(Errc::StepPositivityViolated, "need steps >= 1, horizon > 0, s0 > 0");
    const double dt = model.dt();
    const double sdt = std::sqrt(dt);
    const double sstar = model.sigma_star();
    if (!(std::fabs(model.z_tilt()) * sdt < 1.0))
        throw Error(Errc::StepPositivityViolated, "time step too coarse: tilt density would go negative");
    if (!(1.0 + model.mu * dt - sstar * sdt > 0.0))
        throw Error(Errc::StepPositivityViolated, "time step too coarse: price would go non-positive");

    const int steps = model.steps;
    long k = 1;
    for (int t = 0; t < steps; ++t) k *= 4;

    std::vector<std::string> labels(static_cast<std::size_t>(k));
    for (long w = 0; w < k; ++w) {
        std::string lab;
        for (int t = 0; t < steps; ++t) {
            long digit = (w >> (2 * (steps - 1 - t))) & 3;
            lab += kBranchCode[digit];
            if (t + 1 < steps) lab += '.';
        }
        labels[static_cast<std::size_t>(w)] = lab;
    }

    std::vector<std::vector<std::vector<int>>> filtration(static_cast<std::size_t>(steps) + 1);
    for (int t = 0; t <= steps; ++t) {
        long atoms = 1;
        for (int u = 0; u < t; ++u) atoms *= 4;
        long width = k / atoms;
        filtration[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(atoms));
        for (long a = 0; a < atoms; ++a) {
            auto& atom = filtration[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)];
            atom.reserve(static_cast<std::size_t>(width));
            for (long w = a * width; w < (a + 1) * width; ++w) atom.push_back(static_cast<int>(w));
        }
    }

    std::vector<double> probs(static_cast<std::size_t>(k), std::pow(0.25, steps));
    FiniteFilteredSpace space = build_space(std::move(probs), std::move(filtration), std::move(labels));

    PriceProcess price;
    price.values.resize(static_cast<std::size_t>(steps) + 1);
    for (int t = 0; t <= steps; ++t) {
        const auto& atoms = space.filtration[static_cast<std::size_t>(t)];
        price.values[static_cast<std::size_t>(t)].resize(atoms.size());
        for (std::size_t a = 0; a < atoms.size(); ++a) {
            // atom index encodes the first t branch digits
            double s = model.s0;
            for (int u = 0; u < t; ++u) {
                long digit = (static_cast<long>(a) >> (2 * (t - 1 - u))) & 3;
                s *= 1.0 + model.mu * dt + sstar * kSign1[digit] * sdt;
            }
            price.values[static_cast<std::size_t>(t)][a] = s;
        }
    }
    return make_market(std::move(space), std::move(price));
}

RandomVariable girsanov_density(const TwoFactorModel& model,
                                const std::vector<std::vector<double>>& y_process)
{
    const int steps = model.steps;
    const double sdt = std::sqrt(model.dt());
    const double z = model.z_tilt();
    if (static_cast<int>(y_process.size()) != steps)
        throw Error(Errc::SpaceMismatch, "y process needs one level per step");
    for (int t = 0; t < steps; ++t) {
        long atoms = 1;
        for (int u = 0; u < t; ++u) atoms *= 4;
        if (static_cast<long>(y_process[static_cast<std::size_t>(t)].size()) != atoms)
            throw Error(Errc::SpaceMismatch, "y process does not match atoms at time " + std::to_string(t));
        for (double y : y_process[static_cast<std::size_t>(t)])
            if ((std::fabs(z) + std::fabs(y)) * sdt > 1.0 + 1e-15)
                throw Error(Errc::NegativeDensity, "tilt loadings drive the density negative");
    }

    long k = 1;
    for (int t = 0; t < steps; ++t) k *= 4;
    RandomVariable density(static_cast<std::size_t>(k), 1.0);
    for (long w = 0; w < k; ++w) {
        double d = 1.0;
        long atom = 0;
        for (int t = 0; t < steps; ++t) {
            long digit = (w >> (2 * (steps - 1 - t))) & 3;
            double y = y_process[static_cast<std::size_t>(t)][static_cast<std::size_t>(atom)];
            d *= 1.0 + z * kSign1[digit] * sdt + y * kSign2[digit] * sdt;
            atom = atom * 4 + digit;
        }
        density[static_cast<std::size_t>(w)] = d;
    }
    return density;
}

RandomVariable call_payoff(const Market& market, double strike)
{
    const int k = market.space.num_outcomes();
    const int tmax = market.space.horizon();
    RandomVariable c(static_cast<std::size_t>(k));
    for (int w = 0; w < k; ++w)
        c[static_cast<std::size_t>(w)] =
            std::max(0.0, price_at(market.price, market.space, tmax, w) - strike);
    return c;
}

MartingalePolytope all_density_polytope(const Market& market, const RandomVariable& claim)
{
    const int k = market.space.num_outcomes();
    if (static_cast<int>(claim.size()) != k)
        throw Error(Errc::DimensionMismatch, "claim length does not match outcome count");
    std::vector<ScenarioGenerator> gens;
    gens.reserve(static_cast<std::size_t>(k));
    for (int w = 0; w < k; ++w) {
        RandomVariable z(static_cast<std::size_t>(k), 0.0);
        z[static_cast<std::size_t>(w)] = 1.0 / market.space.probs[static_cast<std::size_t>(w)];
        gens.push_back({std::move(z), claim[static_cast<std::size_t>(w)]});
    }
    ScenarioSet scen = make_scenario_set(market.space, std::move(gens));
    return martingale_polytope(scen, market.subspace, market.space);
}

double superhedge_price(const RandomVariable& claim, const Market& market)
{
    SupFloorResult res = sup_f_tilde_over_Z(all_density_polytope(market, claim));
    if (res.empty) throw Error(Errc::Infeasible, "market admits no martingale density");
    return res.value;
}

HedgeProblem make_hedge_problem(RandomVariable claim, double q, double alpha, double cap)
{
    if (!(q >= 1.0)) throw Error(Errc::InvalidExponent, "shortfall order q must be >= 1");
    if (!(alpha >= 0.0)) throw Error(Errc::InvalidExponent, "endurance alpha must be >= 0");
    if (!(cap > 0.0)) throw Error(Errc::InvalidExponent, "norm cap must be positive");
    HedgeProblem prob;
    prob.claim = std::move(claim);
    prob.q = q;
    prob.p = (q == 1.0) ? std::numeric_limits<double>::infinity() : q / (q - 1.0);
    prob.alpha = alpha;
    prob.cap = cap;
    return prob;
}

namespace {

double weighted_pnorm(const RandomVariable& z, double p, const std::vector<double>& probs)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : z) m = std::max(m, std::fabs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += probs[i] * std::pow(std::fabs(z[i]), p);
    return std::pow(s, 1.0 / p);
}

/// grad += scale * d||z||_p / dz  (supergradient at kinks)
void add_pnorm_gradient(const RandomVariable& z, double p, const std::vector<double>& probs,
                        double norm, double scale, std::vector<double>& grad)
{
    if (scale == 0.0 || norm == 0.0) return;
    if (std::isinf(p)) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < z.size(); ++i)
            if (std::fabs(z[i]) > std::fabs(z[arg])) arg = i;
        grad[arg] += scale * (z[arg] >= 0.0 ? 1.0 : -1.0);
        return;
    }
    const double c = scale * std::pow(norm, 1.0 - p);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == 0.0) continue;
        grad[i] += c * probs[i] * std::pow(std::fabs(z[i]), p - 1.0) * (z[i] > 0.0 ? 1.0 : -1.0);
    }
}

} // namespace

HedgePriceResult efficient_hedge_price(const HedgeProblem& prob, const Market& market)
{
    const auto& probs = market.space.probs;
    const double coef = (prob.alpha == 0.0)
                            ? 0.0
                            : std::pow(prob.q * prob.alpha, 1.0 / prob.q);

    HedgePriceResult out;
    out.within_guarantee = prob.q > 2.0;

    MartingalePolytope poly = all_density_polytope(market, prob.claim);

    if (prob.alpha == 0.0) {
        SupFloorResult res = sup_f_tilde_over_Z(poly);
        if (res.empty) throw Error(Errc::Infeasible, "market admits no martingale density");
        RandomVariable z = poly.density_of(res.weights);
        double nrm = l2_norm(z, market.space);
        if (nrm <= prob.cap + 1e-9) {
            out.price = res.value;
            out.density = std::move(z);
            out.cap_active = std::fabs(nrm - prob.cap) <= kCapBindTol;
            return out;
        }
        // cap cuts off the LP vertex: fall through to the penalized path
    }

    std::vector<std::vector<double>> lambda_verts = polytope_vertices(poly);
    if (lambda_verts.empty()) throw Error(Errc::Infeasible, "market admits no martingale density");
    ConvexPolytope domain;
    domain.generators.reserve(lambda_verts.size());
    for (const auto& lv : lambda_verts) domain.generators.push_back(poly.density_of(lv));

    // cap must admit some feasible density
    RandomVariable origin(probs.size(), 0.0);
    double min_norm = dp_distance(origin, domain, 2.0, market.space);
    if (min_norm > prob.cap + 1e-9)
        throw Error(Errc::Infeasible, "norm cap below the smallest feasible density norm");

    auto objective_at = [&](const RandomVariable& z) {
        double v = inner(z, prob.claim, market.space);
        if (coef != 0.0) v -= coef * weighted_pnorm(z, prob.p, probs);
        return v;
    };

    auto run = [&](double penalty) {
        ConcaveObjective f = [&](const std::vector<double>& z, std::vector<double>& grad) {
            grad.assign(z.size(), 0.0);
            double v = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                v += probs[i] * z[i] * prob.claim[i];
                grad[i] = probs[i] * prob.claim[i];
            }
            if (coef != 0.0) {
                double np = weighted_pnorm(z, prob.p, probs);
                v -= coef * np;
                add_pnorm_gradient(z, prob.p, probs, np, -coef, grad);
            }
            if (penalty > 0.0) {
                double n2 = weighted_pnorm(z, 2.0, probs);
                if (n2 > prob.cap) {
                    v -= penalty * (n2 - prob.cap);
                    add_pnorm_gradient(z, 2.0, probs, n2, -penalty, grad);
                }
            }
            return v;
        };
        return maximize_concave(f, domain);
    };

    ConcaveResult best = run(0.0);
    double n2 = l2_norm(RandomVariable(best.point), market.space);
    out.iterations = best.iterations;
    if (n2 > prob.cap + kCapBindTol) {
        // exact hinge penalty: double until the cap holds, then bisect the
        // weight until it binds within tolerance
        double lo = 0.0;
        double hi = std::max(1.0, std::fabs(coef) + weighted_pnorm(prob.claim, 2.0, probs));
        ConcaveResult capped = run(hi);
        double nhi = l2_norm(RandomVariable(capped.point), market.space);
        int guard = 0;
        while (nhi > prob.cap + kCapBindTol && guard++ < 60) {
            lo = hi;
            hi *= 2.0;
            capped = run(hi);
            nhi = l2_norm(RandomVariable(capped.point), market.space);
        }
        if (nhi > prob.cap + kCapBindTol)
            throw Error(Errc::NoConvergence, "penalty doubling failed to enforce the norm cap");
        for (int it = 0; it < 50 && (prob.cap - nhi) > kCapBindTol; ++it) {
            double mid = 0.5 * (lo + hi);
            ConcaveResult trial = run(mid);
            double nm = l2_norm(RandomVariable(trial.point), market.space);
            if (nm > prob.cap + kCapBindTol) {
                lo = mid;
            } else {
                hi = mid;
                capped = std::move(trial);
                nhi = nm;
            }
        }
        best = std::move(capped);
        out.cap_active = true;
        out.iterations += best.iterations;
    } else {
        out.cap_active = std::fabs(n2 - prob.cap) <= kCapBindTol;
    }

    out.density = RandomVariable(best.point);
    out.price = objective_at(out.density);
    return out;
}

std::vector<SweepRow> alpha_sweep(const HedgeProblem& base, const Market& market,
                                  const std::vector<double>& alphas, Exec mode)
{
    std::vector<SweepRow> rows(alphas.size());
    par::for_index(alphas.size(), mode, [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.alpha = alphas[i];
        try {
            HedgeProblem prob = make_hedge_problem(base.claim, base.q, alphas[i], base.cap);
            row.price = efficient_hedge_price(prob, market).price;
            row.status = "ok";
        } catch (const Error& e) {
            row.price = 0.0;
            row.status = errc_name(e.code);
        }
    });
    return rows;
}

} // namespace capreq
