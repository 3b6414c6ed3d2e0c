#include "capreq/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace capreq {

namespace {

constexpr double kProbSumTol = 1e-12;
constexpr double kRankRelTol = 1e-10; // on singular values of the generator family

bool is_partition(const std::vector<std::vector<int>>& part, int k)
{
    std::vector<int> seen(k, 0);
    for (const auto& atom : part) {
        if (atom.empty()) return false;
        for (int w : atom) {
            if (w < 0 || w >= k || seen[w]) return false;
            seen[w] = 1;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

} // namespace

FiniteFilteredSpace build_space(std::vector<double> probs,
                                std::vector<std::vector<std::vector<int>>> filtration,
                                std::vector<std::string> labels)
{
    const int k = static_cast<int>(probs.size());
    if (k == 0) throw Error(Errc::ZeroProbabilityOutcome, "empty outcome set");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p > 0.0)) throw Error(Errc::ZeroProbabilityOutcome, "probabilities must be strictly positive");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > kProbSumTol)
        throw Error(Errc::ZeroProbabilityOutcome, "probabilities must sum to 1");

    if (filtration.size() < 2)
        throw Error(Errc::NonRefiningFiltration, "need at least the trivial and the terminal partition");
    for (const auto& part : filtration)
        if (!is_partition(part, k))
            throw Error(Errc::NonRefiningFiltration, "level is not a partition of the outcome set");
    if (filtration.front().size() != 1)
        throw Error(Errc::NonRefiningFiltration, "partition at time 0 must be trivial");
    if (static_cast<int>(filtration.back().size()) != k)
        throw Error(Errc::FinalPartitionNotSingletons, "terminal partition must consist of singletons");

    FiniteFilteredSpace space;
    space.probs = std::move(probs);
    space.filtration = std::move(filtration);
    if (labels.empty()) {
        for (int i = 0; i < k; ++i) labels.push_back("w" + std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != k)
        throw Error(Errc::ZeroProbabilityOutcome, "label count does not match outcome count");
    space.outcomes = std::move(labels);

    const int levels = static_cast<int>(space.filtration.size());
    space.atom_of.assign(levels, std::vector<int>(k, -1));
    for (int t = 0; t < levels; ++t)
        for (int a = 0; a < space.num_atoms(t); ++a)
            for (int w : space.filtration[t][a]) space.atom_of[t][w] = a;

    // refinement: outcomes sharing an atom at t+1 must share one at t
    for (int t = 0; t + 1 < levels; ++t)
        for (const auto& atom : space.filtration[t + 1]) {
            int parent = space.atom_of[t][atom.front()];
            for (int w : atom)
                if (space.atom_of[t][w] != parent)
                    throw Error(Errc::NonRefiningFiltration,
                                "partition at time " + std::to_string(t + 1) +
                                    " does not refine its predecessor");
        }
    return space;
}

void check_price_shape(const PriceProcess& s, const FiniteFilteredSpace& space)
{
    if (static_cast<int>(s.values.size()) != space.horizon() + 1)
        throw Error(Errc::SpaceMismatch, "price process has wrong number of time levels");
    for (int t = 0; t <= space.horizon(); ++t)
        if (static_cast<int>(s.values[t].size()) != space.num_atoms(t))
            throw Error(Errc::SpaceMismatch, "price values do not match atoms at time " + std::to_string(t));
}

void check_strategy_shape(const TradingStrategy& strat, const FiniteFilteredSpace& space)
{
    if (static_cast<int>(strat.positions.size()) != space.horizon())
        throw Error(Errc::SpaceMismatch, "strategy has wrong number of time levels");
    for (int t = 0; t < space.horizon(); ++t)
        if (static_cast<int>(strat.positions[t].size()) != space.num_atoms(t))
            throw Error(Errc::SpaceMismatch, "strategy positions do not match atoms at time " + std::to_string(t));
}

double price_at(const PriceProcess& price, const FiniteFilteredSpace& space, int t, int outcome)
{
    return price.values[t][space.atom_of[t][outcome]];
}

RandomVariable terminal_wealth(double x, const TradingStrategy& strategy,
                               const PriceProcess& price, const FiniteFilteredSpace& space)
{
    check_price_shape(price, space);
    check_strategy_shape(strategy, space);
    const int k = space.num_outcomes();
    RandomVariable w(k, x);
    for (int t = 0; t < space.horizon(); ++t)
        for (int j = 0; j < k; ++j) {
            double pos = strategy.positions[t][space.atom_of[t][j]];
            w[j] += pos * (price_at(price, space, t + 1, j) - price_at(price, space, t, j));
        }
    return w;
}

AttainableSubspace attainable_basis(const FiniteFilteredSpace& space, const PriceProcess& price)
{
    check_price_shape(price, space);
    const int k = space.num_outcomes();

    std::vector<RandomVariable> raw;
    std::vector<std::pair<int, int>> raw_node;
    for (int t = 0; t < space.horizon(); ++t)
        for (int a = 0; a < space.num_atoms(t); ++a) {
            RandomVariable g(k, 0.0);
            for (int w : space.filtration[t][a])
                g[w] = price_at(price, space, t + 1, w) - price.values[t][a];
            raw.push_back(std::move(g));
            raw_node.emplace_back(t, a);
        }

    // Pivoted modified Gram-Schmidt in the P-weighted inner product; a
    // generator survives if its residual keeps a relative singular value
    // above kRankRelTol.
    auto wdot = [&](const RandomVariable& x, const RandomVariable& y) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += space.probs[i] * x[i] * y[i];
        return s;
    };

    const std::size_t n = raw.size();
    std::vector<RandomVariable> residual = raw;
    std::vector<double> norm2(n);
    double max_norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        norm2[i] = wdot(residual[i], residual[i]);
        max_norm2 = std::max(max_norm2, norm2[i]);
    }
    const double keep_tol2 = kRankRelTol * kRankRelTol * max_norm2;

    AttainableSubspace sub;
    std::vector<char> used(n, 0);
    while (true) {
        std::size_t best = n;
        double best_n2 = keep_tol2;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && norm2[i] > best_n2) { best_n2 = norm2[i]; best = i; }
        if (best == n) break;
        used[best] = 1;
        RandomVariable q = residual[best];
        for (const auto& o : sub.ortho) { // one reorthogonalization pass
            double c = wdot(q, o);
            for (int j = 0; j < k; ++j) q[j] -= c * o[j];
        }
        double nq = std::sqrt(wdot(q, q));
        for (double& v : q) v /= nq;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            double c = wdot(residual[i], q);
            for (int j = 0; j < k; ++j) residual[i][j] -= c * q[j];
            norm2[i] = wdot(residual[i], residual[i]);
        }
        sub.basis.push_back(raw[best]);
        sub.node.push_back(raw_node[best]);
        sub.ortho.push_back(std::move(q));
    }

    const std::size_t d = sub.basis.size();
    sub.gram = Matrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            sub.gram(i, j) = sub.gram(j, i) = wdot(sub.basis[i], sub.basis[j]);
    if (d > 0) sub.gram_chol = linalg::cholesky(sub.gram);
    return sub;
}

void check_density(const RandomVariable& density, const FiniteFilteredSpace& space, double tol)
{
    if (static_cast<int>(density.size()) != space.num_outcomes())
        throw Error(Errc::DimensionMismatch, "density length does not match outcome count");
    double mean = 0.0;
    for (int i = 0; i < space.num_outcomes(); ++i) {
        if (density[i] < 0.0) throw Error(Errc::NotADensity, "density has a negative entry");
        mean += space.probs[i] * density[i];
    }
    if (std::fabs(mean - 1.0) > tol)
        throw Error(Errc::NotADensity, "density does not integrate to 1");
}

double martingale_violation(const PriceProcess& price, const RandomVariable& density,
                            const FiniteFilteredSpace& space)
{
    check_price_shape(price, space);
    double worst = 0.0;
    for (int t = 0; t < space.horizon(); ++t)
        for (int a = 0; a < space.num_atoms(t); ++a) {
            double drift = 0.0;
            for (int w : space.filtration[t][a])
                drift += space.probs[w] * density[w] *
                         (price_at(price, space, t + 1, w) - price.values[t][a]);
            worst = std::max(worst, std::fabs(drift));
        }
    return worst;
}

bool is_martingale(const PriceProcess& price, const RandomVariable& density,
                   const FiniteFilteredSpace& space, double tol)
{
    check_density(density, space);
    return martingale_violation(price, density, space) <= tol;
}

} // namespace capreq
