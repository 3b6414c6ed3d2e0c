#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "capreq/parallel.hpp"
#include "capreq/scenario.hpp"

namespace capreq {

/// A market instance with its derived attainable-subspace data, built once
/// and shared read-only by the engines.
struct Market {
    FiniteFilteredSpace space;
    PriceProcess price;
    AttainableSubspace subspace;
    ProjectionOperator projection;
};

Market make_market(FiniteFilteredSpace space, PriceProcess price);

/// Turns coefficients over the subspace basis back into node positions.
TradingStrategy strategy_from_coefficients(const Market& market,
                                           const std::vector<double>& coeffs);

enum class CapitalStatus { Finite, UnboundedBelow, ScenariosEmpty };

const char* capital_status_name(CapitalStatus s);

/// Outcome of a capital computation. When status is Finite the primal and
/// dual values agree within 1e-8 (checked), the witness strategy reproduces
/// the primal constraints, and certificate_M is the L2 norm of the witness
/// terminal wealth.
struct CapitalReport {
    CapitalStatus status = CapitalStatus::Finite;
    std::optional<double> primal;          // empty: unbounded below / no scenarios
    std::optional<double> dual;            // empty: martingale polytope is empty
    std::optional<TradingStrategy> witness;
    double certificate_M = 0.0;
    double gap = 0.0;
    std::uint64_t seed = 0;
    std::string note;
};

/// Feasibility of capital x: is there a strategy whose terminal wealth meets
/// every scenario floor? Returns the witness when feasible.
std::pair<bool, std::optional<TradingStrategy>>
is_acceptable(double x, const ScenarioSet& scen, const Market& market);

/// Primal LP: minimize x over (x, hedge coefficients) subject to the
/// scenario floor constraints. Fills status / primal / witness.
CapitalReport min_capital_primal(const ScenarioSet& scen, const Market& market);

/// Independent dual route: sup of the floors over the martingale polytope.
SupFloorResult min_capital_dual(const ScenarioSet& scen, const Market& market);

/// Status without solving the primal: ScenariosEmpty for an empty generator
/// list, UnboundedBelow when the martingale polytope is empty, Finite
/// otherwise.
CapitalStatus classify(const ScenarioSet& scen, const Market& market);

/// L2 norm of the witness terminal wealth; throws NoWitness without one.
double certificate_M(const CapitalReport& report, const Market& market);

/// Max over sampled hull points Y of f~(Y) - x - M ||T(Y)||. A sound
/// certificate keeps this at or below rounding level for x at the minimal
/// capital. Samples draw per-index seeded weights, so serial and parallel
/// runs agree exactly.
double certificate_violation(const ScenarioSet& scen, const Market& market, double m_value,
                             double x, int samples, std::uint64_t seed,
                             Exec mode = Exec::Parallel);

/// Full pipeline: primal, independent dual, cross-checks, certificate.
CapitalReport min_capital(const ScenarioSet& scen, const Market& market,
                          std::uint64_t seed = 0);

} // namespace capreq
