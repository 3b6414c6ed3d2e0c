#pragma once

#include <string>
#include <utility>
#include <vector>

#include "capreq/errors.hpp"
#include "capreq/linalg.hpp"

namespace capreq {

/// One value per outcome: an element of the (finite) L2 space.
using RandomVariable = std::vector<double>;

/// Finite outcome set with strictly positive reference probabilities and a
/// refining partition sequence. partition 0 is {Omega}; the last partition
/// consists of singletons, so terminal-time measurability is the full space.
/// Immutable after build_space; safe to share across threads.
struct FiniteFilteredSpace {
    std::vector<std::string> outcomes;                    // K labels
    std::vector<double> probs;                            // K strictly positive, sums to 1
    std::vector<std::vector<std::vector<int>>> filtration; // [t][atom] -> outcome indices
    std::vector<std::vector<int>> atom_of;                // [t][outcome] -> atom index

    int num_outcomes() const { return static_cast<int>(probs.size()); }
    int horizon() const { return static_cast<int>(filtration.size()) - 1; }
    int num_atoms(int t) const { return static_cast<int>(filtration[t].size()); }
};

/// Adapted price: one value per tree node (time t, atom of partition t).
/// `normalized` marks the initial-price-zero convention; geometric trees
/// leave it unset.
struct PriceProcess {
    std::vector<std::vector<double>> values; // [t][atom]
    bool normalized = false;
};

/// Predictable position sizes: one value per node at times 0..T-1, applied
/// over the following step.
struct TradingStrategy {
    std::vector<std::vector<double>> positions; // [t][atom]
};

/// Basis of the attainable-wealth subspace G (terminal wealths reachable
/// from zero initial capital), with the Gram data used for projections.
/// The basis is the rank-reduced family of per-node increment claims
/// indicator(atom) * (S_{t+1} - S_t); `node` records which tree node each
/// kept basis vector came from, which is what turns LP coefficients back
/// into a TradingStrategy.
struct AttainableSubspace {
    std::vector<RandomVariable> basis;
    std::vector<std::pair<int, int>> node; // (t, atom) per basis vector
    std::vector<RandomVariable> ortho;     // orthonormal frame from the pivoted
                                           // Gram-Schmidt factorization (solve data)
    Matrix gram;                           // P-weighted Gram matrix of basis
    Matrix gram_chol;                      // its Cholesky factor

    int dimension() const { return static_cast<int>(basis.size()); }
};

/// Validates and assembles a space. `labels` defaults to w0..w{K-1}.
FiniteFilteredSpace build_space(std::vector<double> probs,
                                std::vector<std::vector<std::vector<int>>> filtration,
                                std::vector<std::string> labels = {});

/// Checks that a price process / strategy has the node shape of the space.
void check_price_shape(const PriceProcess& s, const FiniteFilteredSpace& space);
void check_strategy_shape(const TradingStrategy& strat, const FiniteFilteredSpace& space);

/// x + sum_t pi_t (S_{t+1} - S_t), outcome-wise.
RandomVariable terminal_wealth(double x, const TradingStrategy& strategy,
                               const PriceProcess& price, const FiniteFilteredSpace& space);

/// Price at time t seen from outcome k.
double price_at(const PriceProcess& price, const FiniteFilteredSpace& space, int t, int outcome);

/// Rank-reduced basis of G. Degenerate prices give dimension 0.
AttainableSubspace attainable_basis(const FiniteFilteredSpace& space, const PriceProcess& price);

/// Martingale check for the measure dQ = Z dP: zero conditional drift of S
/// on every atom at every time, within `tol`. Z must be a density
/// (nonnegative, P-expectation 1 within 1e-10), else NotADensity.
bool is_martingale(const PriceProcess& price, const RandomVariable& density,
                   const FiniteFilteredSpace& space, double tol = 1e-10);

/// Max absolute conditional drift over all nodes (the quantity is_martingale
/// compares against its tolerance).
double martingale_violation(const PriceProcess& price, const RandomVariable& density,
                            const FiniteFilteredSpace& space);

/// Validates that `density` is a probability density w.r.t. the space.
void check_density(const RandomVariable& density, const FiniteFilteredSpace& space,
                   double tol = 1e-10);

} // namespace capreq
