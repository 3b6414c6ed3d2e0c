#pragma once

#include <string>
#include <vector>

#include "capreq/acceptability.hpp"

namespace capreq {

/// Two-driver market discretized on a quaternary tree. Each step the
/// rotated drivers move by (+-sqrt(dt), +-sqrt(dt)) with probability 1/4;
/// the traded price follows the first driver only, which is what makes the
/// market incomplete:
///   S_{t+1} = S_t (1 + mu dt + sigma_star dW1).
struct TwoFactorModel {
    double mu = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    int steps = 1;
    double horizon = 1.0;
    double s0 = 1.0;

    double sigma_star() const;
    double dt() const { return horizon / steps; }
    /// Market-price-of-risk tilt on the first driver; the unique value that
    /// makes a one-step change of measure remove the drift.
    double z_tilt() const { return -mu / sigma_star(); }
};

/// Validates step positivity (density and price stay positive) and builds
/// the market. Outcomes are ordered by per-step branch, first-driver-up
/// branches first; labels concatenate per-step codes uu/ud/du/dd.
Market build_two_factor_tree(const TwoFactorModel& model);

/// Discrete change-of-measure density with the drift-removing tilt on the
/// first driver and caller-chosen predictable loadings y on the second:
/// product over steps of (1 + z dW1 + y_t dW2). Every admissible y yields
/// an exact martingale density for the tree. y is indexed [t][atom].
RandomVariable girsanov_density(const TwoFactorModel& model,
                                const std::vector<std::vector<double>>& y_process);

/// Call payoff (S_T - strike)^+ on the tree.
RandomVariable call_payoff(const Market& market, double strike);

/// Martingale polytope over the all-densities family of the tree (one
/// point-mass generator per outcome). Floors are <generator, claim>, so the
/// sup of the floors over the polytope is the superhedging value.
MartingalePolytope all_density_polytope(const Market& market, const RandomVariable& claim);

/// Least capital that covers the claim with zero shortfall: the sup of
/// expected payoff over all martingale densities of the tree.
double superhedge_price(const RandomVariable& claim, const Market& market);

/// Shortfall-constrained hedge data: bounding the q-th moment of the
/// shortfall by alpha prices the claim at
///   sup over martingale densities Z with ||Z||_2 <= cap of
///   <Z, C> - (q alpha)^{1/q} ||Z||_p,  1/p + 1/q = 1.
struct HedgeProblem {
    RandomVariable claim;
    double q = 2.0;
    double p = 2.0; // conjugate exponent, derived from q
    double alpha = 0.0;
    double cap = 0.0;
};

HedgeProblem make_hedge_problem(RandomVariable claim, double q, double alpha, double cap);

struct HedgePriceResult {
    double price = 0.0;
    RandomVariable density;      // optimizing density
    bool cap_active = false;
    bool within_guarantee = false; // q > 2, where the continuous theory applies
    int iterations = 0;
};

/// Concave maximization of the hedging functional over the vertex-described
/// martingale polytope; the norm cap is enforced by penalty bisection when
/// the unconstrained optimum violates it. alpha = 0 short-circuits to the
/// superhedge LP. Throws Infeasible when no feasible density satisfies the
/// cap and Unsupported when the polytope is too large to enumerate.
HedgePriceResult efficient_hedge_price(const HedgeProblem& prob, const Market& market);

struct SweepRow {
    double alpha = 0.0;
    double price = 0.0;
    std::string status; // "ok" or the error category for this row
};

/// One price per alpha; rows are independent and may run in parallel.
std::vector<SweepRow> alpha_sweep(const HedgeProblem& base, const Market& market,
                                  const std::vector<double>& alphas,
                                  Exec mode = Exec::Parallel);

} // namespace capreq
