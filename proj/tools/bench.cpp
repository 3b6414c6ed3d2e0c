// Times the OpenMP batch kernels against their serial reference on fixed
// workloads and checks that both produce identical results.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "capreq/hedging.hpp"
#include "capreq/instances.hpp"
#include "capreq/parallel.hpp"
#include "capreq/selftest.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <class Fn>
double time_run(Fn&& fn)
{
    auto t0 = clock_type::now();
    fn();
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, double diff)
{
    std::printf("%-24s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  max|diff| %.3e\n", name,
                serial_s, parallel_s, serial_s / parallel_s, diff);
}

} // namespace

int main(int argc, char** argv)
{
    int scale = 1;
    if (argc > 1) scale = std::max(1, std::atoi(argv[1]));
    std::printf("threads available: %d, workload scale: %d\n", capreq::par::max_threads(), scale);

    // certificate sampling: one LP per sampled hull point, max reduction
    {
        capreq::InstanceOptions opts;
        opts.max_outcomes = 12;
        opts.max_generators = 8;
        capreq::RandomInstance inst = capreq::random_instance(7001);
        capreq::CapitalReport rep = capreq::min_capital(inst.scen, inst.market, 7001);
        const int samples = 40000 * scale;
        double serial_v = 0.0, parallel_v = 0.0;
        double ts = time_run([&] {
            serial_v = capreq::certificate_violation(inst.scen, inst.market, rep.certificate_M,
                                                     *rep.primal, samples, 99, capreq::Exec::Serial);
        });
        double tp = time_run([&] {
            parallel_v = capreq::certificate_violation(inst.scen, inst.market, rep.certificate_M,
                                                       *rep.primal, samples, 99,
                                                       capreq::Exec::Parallel);
        });
        report("certificate_sampling", ts, tp, std::fabs(serial_v - parallel_v));
    }

    // alpha sweep on the two-driver tree: one concave maximization per row
    {
        capreq::TwoFactorModel model;
        model.mu = 0.1;
        model.sigma1 = 0.3;
        model.sigma2 = 0.4;
        model.steps = 2;
        model.horizon = 1.0;
        model.s0 = 1.0;
        capreq::Market market = capreq::build_two_factor_tree(model);
        capreq::RandomVariable claim = capreq::call_payoff(market, 1.0);
        capreq::HedgeProblem base = capreq::make_hedge_problem(claim, 2.0, 0.0, 10.0);
        std::vector<double> alphas;
        for (int i = 0; i < 12 * scale; ++i) alphas.push_back(0.002 * i);

        std::vector<capreq::SweepRow> rs, rp;
        double ts = time_run([&] { rs = capreq::alpha_sweep(base, market, alphas, capreq::Exec::Serial); });
        double tp = time_run([&] { rp = capreq::alpha_sweep(base, market, alphas, capreq::Exec::Parallel); });
        double diff = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            diff = std::max(diff, std::fabs(rs[i].price - rp[i].price));
        report("alpha_sweep", ts, tp, diff);
    }

    // randomized duality battery: independent primal/dual solves per instance
    {
        capreq::selftest::Config cfg;
        cfg.duality_instances = 300 * scale;
        cfg.mode = capreq::Exec::Serial;
        capreq::selftest::SuiteResult rs{}, rp{};
        double ts = time_run([&] { rs = capreq::selftest::suite_duality(cfg); });
        cfg.mode = capreq::Exec::Parallel;
        double tp = time_run([&] { rp = capreq::selftest::suite_duality(cfg); });
        report("duality_battery", ts, tp, std::fabs(rs.max_err - rp.max_err));
    }
    return 0;
}
