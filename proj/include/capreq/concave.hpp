#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "capreq/geometry.hpp"

namespace capreq {

/// Evaluates a concave objective at `point` and writes a supergradient
/// (plain partial derivatives, one per coordinate) into `grad`.
using ConcaveObjective =
    std::function<double(const std::vector<double>& point, std::vector<double>& grad)>;

struct ConcaveOptions {
    int restarts = 5;
    int max_iter = 4000;
    std::uint64_t seed = 20240613ULL;
    std::vector<double>* trace = nullptr; // accepted values, for monotonicity checks
};

struct ConcaveResult {
    double value = 0.0;
    std::vector<double> weights; // convex weights over the domain generators
    std::vector<double> point;   // sum_j weights_j * generator_j
    int iterations = 0;
};

/// Maximizes a concave function over conv(domain.generators) by projected
/// supergradient ascent on the weight simplex: diminishing base steps
/// a/(1+k) with halving line search (accepted values never decrease),
/// restarted from random simplex points, best kept.
ConcaveResult maximize_concave(const ConcaveObjective& f, const ConvexPolytope& domain,
                               const ConcaveOptions& opts = {});

} // namespace capreq
