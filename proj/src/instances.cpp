#include "capreq/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "capreq/rng.hpp"

namespace capreq {

std::vector<double> random_probs(std::mt19937_64& rng, int k)
{
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> p(static_cast<std::size_t>(k));
    double s = 0.0;
    for (double& v : p) { v = exp1(rng); s += v; }
    for (double& v : p) v /= s;
    // exact renormalization so the 1e-12 sum check cannot trip
    double s2 = std::accumulate(p.begin(), p.end(), 0.0);
    p.back() += 1.0 - s2;
    return p;
}

RandomVariable random_density(std::mt19937_64& rng, const FiniteFilteredSpace& space)
{
    std::exponential_distribution<double> exp1(1.0);
    RandomVariable z(space.probs.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = exp1(rng);
        mass += space.probs[i] * z[i];
    }
    for (double& v : z) v /= mass;
    return z;
}

namespace {

/// Nested-cut filtration on outcomes 0..k-1: every internal boundary gets a
/// birth level; the partition at time t keeps the cuts born by t.
std::vector<std::vector<std::vector<int>>> random_filtration(std::mt19937_64& rng, int k, int t_max)
{
    std::uniform_int_distribution<int> birth(1, t_max);
    std::vector<int> cut_birth(static_cast<std::size_t>(k) - 1);
    for (int& b : cut_birth) b = birth(rng);

    std::vector<std::vector<std::vector<int>>> filt(static_cast<std::size_t>(t_max) + 1);
    for (int t = 0; t <= t_max; ++t) {
        std::vector<std::vector<int>> part;
        std::vector<int> atom{0};
        for (int w = 1; w < k; ++w) {
            if (cut_birth[static_cast<std::size_t>(w) - 1] <= t) {
                part.push_back(atom);
                atom.clear();
            }
            atom.push_back(w);
        }
        part.push_back(atom);
        filt[static_cast<std::size_t>(t)] = std::move(part);
    }
    return filt;
}

PriceProcess random_price(std::mt19937_64& rng, const FiniteFilteredSpace& space)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    PriceProcess price;
    price.values.resize(space.filtration.size());
    price.values[0] = {gauss(rng)};
    for (int t = 1; t <= space.horizon(); ++t) {
        const auto st = static_cast<std::size_t>(t);
        price.values[st].resize(space.filtration[st].size());
        for (int a = 0; a < space.num_atoms(t); ++a) {
            int parent = space.atom_of[st - 1][space.filtration[st][static_cast<std::size_t>(a)].front()];
            price.values[st][static_cast<std::size_t>(a)] =
                price.values[st - 1][static_cast<std::size_t>(parent)] + gauss(rng);
        }
    }
    return price;
}

/// A martingale density for the market, if one exists.
std::optional<RandomVariable> find_martingale_density(const Market& market)
{
    const int k = market.space.num_outcomes();
    std::vector<ScenarioGenerator> gens;
    for (int w = 0; w < k; ++w) {
        RandomVariable z(static_cast<std::size_t>(k), 0.0);
        z[static_cast<std::size_t>(w)] = 1.0 / market.space.probs[static_cast<std::size_t>(w)];
        gens.push_back({std::move(z), 0.0});
    }
    ScenarioSet scen = make_scenario_set(market.space, std::move(gens));
    MartingalePolytope poly = martingale_polytope(scen, market.subspace, market.space);
    auto lambda = polytope_feasible_point(poly);
    if (!lambda) return std::nullopt;
    RandomVariable z = poly.density_of(*lambda);
    for (double& v : z) v = std::max(0.0, v);
    // re-normalize away the LP feasibility slack
    double mass = inner(z, RandomVariable(z.size(), 1.0), market.space);
    for (double& v : z) v /= mass;
    return z;
}

} // namespace

Market random_market(std::mt19937_64& rng, const InstanceOptions& opts)
{
    std::uniform_int_distribution<int> kd(2, opts.max_outcomes);
    const int k = kd(rng);
    std::uniform_int_distribution<int> td(1, opts.max_horizon);
    const int t_max = td(rng);
    FiniteFilteredSpace space = build_space(random_probs(rng, k), random_filtration(rng, k, t_max));
    PriceProcess price = random_price(rng, space);
    return make_market(std::move(space), std::move(price));
}

RandomInstance random_instance(std::uint64_t seed, const InstanceOptions& opts)
{
    auto rng = item_rng(seed, 0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Market market = random_market(rng, opts);
        auto mart = find_martingale_density(market);
        if (!mart) continue; // arbitrage tree: redraw

        std::uniform_int_distribution<int> nd(1, std::max(1, opts.max_generators - 1));
        std::normal_distribution<double> gauss(0.0, opts.floor_scale);
        std::vector<ScenarioGenerator> gens;
        const int extra = nd(rng);
        for (int i = 0; i < extra; ++i)
            gens.push_back({random_density(rng, market.space), gauss(rng)});
        gens.push_back({*mart, gauss(rng)});
        std::shuffle(gens.begin(), gens.end(), rng);

        RandomInstance inst;
        inst.scen = make_scenario_set(market.space, std::move(gens));
        inst.market = std::move(market);
        inst.seed = seed;
        return inst;
    }
    throw Error(Errc::NoConvergence, "could not draw a martingale-feasible instance");
}

RandomInstance random_empty_z_instance(std::uint64_t seed, const InstanceOptions& opts)
{
    auto rng = item_rng(seed, 1);
    for (int attempt = 0; attempt < 256; ++attempt) {
        Market market = random_market(rng, opts);
        if (market.subspace.dimension() < 1) continue;
        const auto& space = market.space;
        RandomVariable ones(space.probs.size(), 1.0);

        // attainable direction with the largest variance (unit norm)
        int pick = -1;
        double best_var = 1e-8;
        for (int j = 0; j < market.subspace.dimension(); ++j) {
            const RandomVariable& b = market.subspace.basis[static_cast<std::size_t>(j)];
            double nb = l2_norm(b, space);
            double m = inner(b, ones, space) / nb;
            double var = 1.0 - m * m;
            if (var > best_var) { best_var = var; pick = j; }
        }
        if (pick < 0) continue;
        RandomVariable ghat = market.subspace.basis[static_cast<std::size_t>(pick)];
        double ng = l2_norm(ghat, space);
        for (double& v : ghat) v /= ng;
        const double mean = inner(ghat, ones, space);

        RandomVariable centered(ghat.size());
        double max_abs = 0.0;
        for (std::size_t i = 0; i < ghat.size(); ++i) {
            centered[i] = ghat[i] - mean;
            max_abs = std::max(max_abs, std::fabs(centered[i]));
        }
        if (max_abs < 1e-10) continue;
        double gamma = 0.9 / max_abs;
        if (mean < 0.0) gamma = -gamma;

        // Tilted density: nonnegative, integrates to 1, and its inner
        // product with ghat is mean + gamma * variance, bounded away from 0.
        RandomVariable tilt(ghat.size());
        for (std::size_t i = 0; i < ghat.size(); ++i) tilt[i] = 1.0 + gamma * centered[i];
        const double tau = inner(tilt, ghat, space);
        if (std::fabs(tau) < 1e-4) continue;

        std::uniform_int_distribution<int> nd(1, opts.max_generators);
        std::normal_distribution<double> gauss(0.0, opts.floor_scale);
        std::vector<ScenarioGenerator> gens;
        const int n = nd(rng);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            RandomVariable z = random_density(rng, space);
            double s = inner(z, ghat, space);
            // mix toward the tilt until <Z', ghat> clears tau/2 on tau's side
            const double target = tau / 2.0;
            double beta = 0.0;
            if ((tau > 0.0 && s < target) || (tau < 0.0 && s > target))
                beta = std::min(1.0, 1.05 * (target - s) / (tau - s));
            RandomVariable mixed(z.size());
            for (std::size_t r = 0; r < z.size(); ++r)
                mixed[r] = (1.0 - beta) * z[r] + beta * tilt[r];
            if (std::fabs(inner(mixed, ghat, space)) < std::fabs(tau) / 4.0) { ok = false; break; }
            gens.push_back({std::move(mixed), gauss(rng)});
        }
        if (!ok) continue;

        RandomInstance inst;
        inst.scen = make_scenario_set(market.space, std::move(gens));
        inst.market = std::move(market);
        inst.seed = seed;
        return inst;
    }
    throw Error(Errc::NoConvergence, "could not construct an empty-polytope instance");
}

} // namespace capreq
