#pragma once

#include <optional>
#include <vector>

#include "capreq/acceptability.hpp"

namespace capreq {

/// Scenario densities with penalties and a claim: the data of a worst-case
/// penalized-expected-loss risk measure.
struct RiskSpec {
    std::vector<RandomVariable> densities;
    std::vector<double> penalties;
    RandomVariable claim;
};

RiskSpec make_risk_spec(const FiniteFilteredSpace& space, std::vector<RandomVariable> densities,
                        std::vector<double> penalties, RandomVariable claim);

/// rho(X) = max_i ( <Z_i, -X> + h_i ). Cash-translative and convex.
double rho(const RandomVariable& x, const RiskSpec& spec, const FiniteFilteredSpace& space);

/// Risk after optimal hedging within the attainable subspace:
/// inf over xi in G of rho(X - xi). Unbounded below exactly when the
/// martingale polytope of the densities is empty.
struct RhoGResult {
    bool unbounded = false;
    double value = 0.0;
    std::optional<TradingStrategy> hedge;
};

RhoGResult rho_g(const RandomVariable& x, const RiskSpec& spec, const Market& market);

/// Minimal capital computed with floors h_i - <Z_i, claim> versus
/// rho_g(claim): the two sides of the capital identity. `pass` also covers
/// the case where both sides are unbounded below.
struct IdentityCheck {
    std::optional<double> lhs; // minimal capital (empty: unbounded)
    std::optional<double> rhs; // rho_G of the claim (empty: unbounded)
    bool pass = false;
    double difference = 0.0;
};

IdentityCheck capital_identity_check(const RiskSpec& spec, const Market& market,
                                     double tol = 1e-8);

} // namespace capreq
