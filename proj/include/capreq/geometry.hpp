#pragma once

#include <vector>

#include "capreq/market.hpp"

namespace capreq {

/// P-weighted inner product sum_k p_k X_k Y_k.
double inner(const RandomVariable& x, const RandomVariable& y, const FiniteFilteredSpace& space);

/// Hilbert (p=2) norm under the reference probabilities.
double l2_norm(const RandomVariable& x, const FiniteFilteredSpace& space);

/// (sum_k p_k |X_k|^p)^{1/p} for p in [1,2].
double lp_norm(const RandomVariable& x, double p, const FiniteFilteredSpace& space);

/// Orthogonal projection T onto the attainable subspace, applied through
/// the orthonormal frame of the subspace's Gram factorization. Idempotent
/// and self-adjoint under the P-weighted inner product. Read-only after
/// construction.
class ProjectionOperator {
public:
    ProjectionOperator() = default; // projection onto the zero subspace
    ProjectionOperator(const FiniteFilteredSpace& space, const AttainableSubspace& subspace);

    RandomVariable project(const RandomVariable& x) const;    // T(X)
    RandomVariable complement(const RandomVariable& x) const; // X - T(X)
    double projected_norm(const RandomVariable& x) const;     // ||T(X)||

    int dimension() const { return static_cast<int>(frame_.size()); }

private:
    std::vector<double> probs_;
    std::vector<RandomVariable> frame_; // orthonormal under the weighted inner product
};

inline RandomVariable project(const RandomVariable& x, const ProjectionOperator& t)
{
    return t.project(x);
}

/// Convex hull of finitely many points of L2.
struct ConvexPolytope {
    std::vector<RandomVariable> generators;
};

struct NearestPointResult {
    RandomVariable point;
    std::vector<double> weights; // convex weights over the generators
    int iterations = 0;
};

/// Nearest point of the polytope in the weighted Lp norm, p in (1,2].
/// Minimizes ||X - sum w_i g_i||_p^p over the weight simplex by projected
/// gradient with backtracking; unique point for p in (1,2].
NearestPointResult nearest_point_detail(const RandomVariable& x, const ConvexPolytope& pi,
                                        double p, const FiniteFilteredSpace& space);
RandomVariable nearest_point(const RandomVariable& x, const ConvexPolytope& pi, double p,
                             const FiniteFilteredSpace& space);

/// inf over the polytope of ||X - Y||_p, p in (1,2].
double dp_distance(const RandomVariable& x, const ConvexPolytope& pi, double p,
                   const FiniteFilteredSpace& space);

/// Exact Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_to_simplex(std::vector<double> w);

} // namespace capreq
