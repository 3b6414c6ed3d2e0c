#pragma once

#include <optional>
#include <vector>

#include "capreq/geometry.hpp"
#include "capreq/market.hpp"

namespace capreq {

struct ScenarioGenerator {
    RandomVariable density;
    double floor = 0.0;
};

/// Finite scenario family: generator densities with floors, optionally an
/// L2 norm cap each generator must respect. The engine works on the convex
/// hull of the generators; the list may contain duplicates or interior
/// points and is never assumed to consist of extreme points.
struct ScenarioSet {
    std::vector<ScenarioGenerator> generators;
    std::optional<double> norm_cap;

    int size() const { return static_cast<int>(generators.size()); }
};

/// Validates densities (and the cap, when present) against the space.
ScenarioSet make_scenario_set(const FiniteFilteredSpace& space,
                              std::vector<ScenarioGenerator> generators,
                              std::optional<double> norm_cap = std::nullopt);

/// Largest floor assignable to a hull point: maximize sum lambda_i floor_i
/// over convex representations Y = sum lambda_i Z_i. Throws NotInHull when
/// the representation LP is infeasible. Equality rows are scaled to unit
/// norm before the solve.
double f_tilde(const RandomVariable& y, const ScenarioSet& scen, const FiniteFilteredSpace& space);

/// Weight-space description of Z = hull(generators) intersected with the
/// orthogonal complement of the attainable subspace: feasible lambda satisfy
/// lambda >= 0, sum lambda = 1, B lambda = 0 with B[j][i] = <basis_j, Z_i>.
struct MartingalePolytope {
    std::vector<ScenarioGenerator> generators;
    Matrix constraint; // rows: subspace basis, cols: generators (rows unit-scaled)
    std::vector<double> probs;

    RandomVariable density_of(const std::vector<double>& lambda) const;
};

MartingalePolytope martingale_polytope(const ScenarioSet& scen, const AttainableSubspace& g,
                                       const FiniteFilteredSpace& space);

/// A feasible weight vector, or nothing when Z is empty.
std::optional<std::vector<double>> polytope_feasible_point(const MartingalePolytope& poly);

struct SupFloorResult {
    bool empty = false;   // Z = emptyset
    double value = 0.0;   // defined when !empty
    std::vector<double> weights;
};

/// sup of f~ over Z as one LP: maximize sum lambda_i floor_i over the
/// feasible weights. The simplex is compact, so the only flags are a value
/// or emptiness.
SupFloorResult sup_f_tilde_over_Z(const MartingalePolytope& poly);

/// All vertices of the feasible weight set, by basic-solution enumeration.
/// Throws Unsupported when the subset count exceeds `budget`.
std::vector<std::vector<double>> polytope_vertices(const MartingalePolytope& poly,
                                                   long long budget = 2000000);

} // namespace capreq
