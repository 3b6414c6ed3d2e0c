#include "capreq/concave.hpp"

#include <algorithm>
#include <cmath>

#include "capreq/rng.hpp"

namespace capreq {

namespace {

// stop a restart after this many consecutive iterations without progress
constexpr int kStallLimit = 80;
constexpr double kStallTol = 1e-14;

std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n)
{
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (double& v : w) { v = exp1(rng); s += v; }
    for (double& v : w) v /= s;
    return w;
}

} // namespace

ConcaveResult maximize_concave(const ConcaveObjective& f, const ConvexPolytope& domain,
                               const ConcaveOptions& opts)
{
    if (domain.generators.empty()) throw Error(Errc::EmptySet, "domain has no generators");
    const std::size_t n = domain.generators.size();
    const std::size_t dim = domain.generators.front().size();
    for (const auto& g : domain.generators)
        if (g.size() != dim) throw Error(Errc::DimensionMismatch, "generator length mismatch");

    auto combine = [&](const std::vector<double>& w, std::vector<double>& pt) {
        pt.assign(dim, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] == 0.0) continue;
            for (std::size_t i = 0; i < dim; ++i) pt[i] += w[j] * domain.generators[j][i];
        }
    };

    std::vector<double> pt, grad_pt(dim), grad_w(n), cand, cand_pt;
    auto eval = [&](const std::vector<double>& w, std::vector<double>* gw) {
        combine(w, pt);
        double v = f(pt, grad_pt);
        if (gw) {
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < dim; ++i) s += grad_pt[i] * domain.generators[j][i];
                (*gw)[j] = s;
            }
        }
        return v;
    };

    ConcaveResult best;
    bool have_best = false;
    int total_iters = 0;

    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        auto rng = item_rng(opts.seed, static_cast<std::uint64_t>(r));
        std::vector<double> w = random_simplex_point(rng, n);
        double fw = eval(w, &grad_w);
        if (!std::isfinite(fw))
            throw Error(Errc::NoConvergence, "objective not finite at a feasible point");

        double g0 = 0.0;
        for (double g : grad_w) g0 += g * g;
        const double base = 1.0 / std::max(1e-12, std::sqrt(g0));
        double adapt = base;

        int stall = 0;
        for (int k = 0; k < opts.max_iter; ++k, ++total_iters) {
            // diminishing floor keeps the classical supergradient guarantee;
            // the adaptive part restores fast steps on smooth stretches
            double step = std::max(adapt, base / (1.0 + k));
            bool accepted = false;
            for (int bt = 0; bt < 30; ++bt) {
                cand = w;
                for (std::size_t j = 0; j < n; ++j) cand[j] += step * grad_w[j];
                cand = project_to_simplex(std::move(cand));
                double fc = eval(cand, nullptr);
                if (fc >= fw) {
                    double gain = fc - fw;
                    adapt = (bt == 0) ? step * 1.5 : step;
                    w.swap(cand);
                    fw = fc;
                    accepted = true;
                    if (opts.trace) opts.trace->push_back(fw);
                    stall = (gain > kStallTol * (1.0 + std::fabs(fw))) ? 0 : stall + 1;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                ++stall;
                adapt *= 0.5;
            }
            if (stall >= kStallLimit) break;
            eval(w, &grad_w);
        }

        if (!have_best || fw > best.value) {
            have_best = true;
            best.value = fw;
            best.weights = w;
        }
    }

    combine(best.weights, best.point);
    best.iterations = total_iters;
    return best;
}

} // namespace capreq
