#pragma once

#include <cstdint>
#include <random>

#include "capreq/acceptability.hpp"

namespace capreq {

/// Seeded generator of desk-scale test markets: probabilities from a
/// symmetric Dirichlet(1) draw, a nested random filtration, prices with
/// standard normal increments, densities from normalized nonnegative draws.
struct InstanceOptions {
    int max_outcomes = 12;
    int max_horizon = 3;
    int max_generators = 8;
    double floor_scale = 1.0;
};

struct RandomInstance {
    Market market;
    ScenarioSet scen;
    std::uint64_t seed = 0;
};

std::vector<double> random_probs(std::mt19937_64& rng, int k);
RandomVariable random_density(std::mt19937_64& rng, const FiniteFilteredSpace& space);
Market random_market(std::mt19937_64& rng, const InstanceOptions& opts = {});

/// Instance whose scenario hull is guaranteed to contain a martingale
/// density (one is computed for the drawn tree and added as a generator;
/// prices are redrawn if the tree admits none).
RandomInstance random_instance(std::uint64_t seed, const InstanceOptions& opts = {});

/// Instance whose scenario hull provably misses the orthogonal complement:
/// every generator is mixed toward a tilted density whose inner product
/// with a fixed attainable direction stays bounded away from zero, so the
/// martingale polytope is empty with a safe margin.
RandomInstance random_empty_z_instance(std::uint64_t seed, const InstanceOptions& opts = {});

} // namespace capreq
