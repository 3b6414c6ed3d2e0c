#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capreq/parallel.hpp"

namespace capreq::selftest {

struct SuiteResult {
    std::string name;
    int total = 0;
    int failures = 0;
    double max_err = 0.0; // worst observed metric for the suite
    double seconds = 0.0;
    std::string detail;   // logged observations (not failures)

    bool passed() const { return failures == 0; }
};

/// Suite sizes default to the shipped verification battery; tol_scale
/// multiplies every tolerance (0 makes the battery report its raw
/// numerical residuals as failures instead of hiding them).
struct Config {
    std::uint64_t seed = 42;
    double tol_scale = 1.0;
    int duality_instances = 500;
    int nozero_instances = 100;
    int certificate_instances = 500; // reuses the duality instance seeds
    int certificate_samples = 10000;
    int identity_instances = 200;
    int geometry_vectors = 1000;
    int nearest_instances = 200;
    int sunny_instances = 100;
    int concavity_triples = 1000;
    int girsanov_draws = 50;
    int monotonicity_instances = 500;
    int lp_instances = 200;
    Exec mode = Exec::Parallel;
};

SuiteResult suite_duality(const Config& cfg);            // primal LP vs dual LP
SuiteResult suite_nozero(const Config& cfg);             // empty polytope => unbounded
SuiteResult suite_certificate(const Config& cfg);        // sampled norm-bound condition
SuiteResult suite_risk_identity(const Config& cfg);      // capital == hedged risk
SuiteResult suite_geometry(const Config& cfg);           // projector identities
SuiteResult suite_nearest_oracle(const Config& cfg);     // vs subset-enumeration QP
SuiteResult suite_sunny(const Config& cfg);              // projection ray invariance
SuiteResult suite_concavity(const Config& cfg);          // hull-extension concavity
SuiteResult suite_worked_binomial(const Config& cfg);    // hand-solved two-outcome case
SuiteResult suite_hedging_closed_forms(const Config& cfg);
SuiteResult suite_girsanov(const Config& cfg);           // tilt densities are martingale
SuiteResult suite_monotonicity(const Config& cfg);
SuiteResult suite_lp(const Config& cfg);                 // solver KKT checks

std::vector<SuiteResult> run_all(const Config& cfg);

} // namespace capreq::selftest
