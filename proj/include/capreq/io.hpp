#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "capreq/acceptability.hpp"
#include "capreq/hedging.hpp"

namespace capreq::io {

using json = nlohmann::ordered_json;

/// Market file:
///   {"probs":[0.5,0.5],
///    "filtration":[[["u","d"]],[["u"],["d"]]],
///    "price":{"t0":[0.0],"t1":[1.0,-1.0]}}
/// Outcome order follows the first (trivial) partition; atom indices follow
/// file order; prices are listed per atom per time under keys t0..tT.
Market parse_market(const json& j);
Market load_market(const std::string& path);
json market_json(const Market& market);

/// Scenario file: {"generators":[{"density":[2.0,0.0],"floor":1.0},...],
///                 "norm_cap": 5.0}  (norm_cap optional)
ScenarioSet parse_scenarios(const json& j, const FiniteFilteredSpace& space);
ScenarioSet load_scenarios(const std::string& path, const FiniteFilteredSpace& space);

/// Claim file: {"values":[1.0,0.0]}
RandomVariable parse_claim(const json& j, const FiniteFilteredSpace& space);
RandomVariable load_claim(const std::string& path, const FiniteFilteredSpace& space);

json strategy_json(const TradingStrategy& strategy);

/// Capital report. Non-finite values appear as flag strings: primal
/// "unbounded", dual "empty"; never NaN.
json capital_report_json(const CapitalReport& report);

json sweep_report_json(const TwoFactorModel& model, const HedgeProblem& base,
                       const std::vector<SweepRow>& rows, const HedgePriceResult* diag,
                       std::uint64_t seed);

/// CSV with header alpha,price,status; numbers carry 17 significant digits;
/// failed rows leave the price field empty.
std::string sweep_csv(const std::vector<SweepRow>& rows);

json load_json_file(const std::string& path);

/// Writes through a temp file in the same directory, then renames.
void write_text_atomic(const std::string& path, const std::string& text);
void write_json_atomic(const std::string& path, const json& j);

std::string format_double(double v); // 17 significant digits

} // namespace capreq::io
