#include "capreq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "capreq/lp.hpp"

namespace capreq {

namespace {
constexpr int kNearestMaxIter = 10000;
constexpr double kObjTol = 1e-12;  // objective improvement
constexpr double kMoveTol = 1e-10; // weight movement, sup norm

/// Convex weights representing x, when x lies in the hull of the generators.
std::optional<std::vector<double>> hull_membership(const RandomVariable& x,
                                                   const ConvexPolytope& pi)
{
    const std::size_t n = pi.generators.size();
    const std::size_t k = x.size();
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) lp.add_var(0.0, false);
    for (std::size_t r = 0; r < k; ++r) {
        double scale = x[r] * x[r];
        for (std::size_t j = 0; j < n; ++j) scale += pi.generators[j][r] * pi.generators[j][r];
        scale = scale > 0.0 ? std::sqrt(scale) : 1.0;
        std::map<int, double> coeffs;
        for (std::size_t j = 0; j < n; ++j)
            coeffs[static_cast<int>(j)] = pi.generators[j][r] / scale;
        lp.add_eq(coeffs, x[r] / scale);
    }
    {
        std::map<int, double> coeffs;
        double scale = std::sqrt(static_cast<double>(n) + 1.0);
        for (std::size_t j = 0; j < n; ++j) coeffs[static_cast<int>(j)] = 1.0 / scale;
        lp.add_eq(coeffs, 1.0 / scale);
    }
    SolveStatus st = solve_lp(lp);
    if (!st.optimal()) return std::nullopt;
    double total = 0.0;
    for (double& v : st.x) { v = std::max(0.0, v); total += v; }
    for (double& v : st.x) v /= total;
    return std::move(st.x);
}

} // namespace

double inner(const RandomVariable& x, const RandomVariable& y, const FiniteFilteredSpace& space)
{
    const std::size_t k = space.probs.size();
    if (x.size() != k || y.size() != k)
        throw Error(Errc::DimensionMismatch, "inner product operands must match the outcome count");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += space.probs[i] * x[i] * y[i];
    return s;
}

double l2_norm(const RandomVariable& x, const FiniteFilteredSpace& space)
{
    return std::sqrt(inner(x, x, space));
}

double lp_norm(const RandomVariable& x, double p, const FiniteFilteredSpace& space)
{
    if (!(p >= 1.0 && p <= 2.0))
        throw Error(Errc::InvalidExponent, "lp_norm requires p in [1,2]");
    if (x.size() != space.probs.size())
        throw Error(Errc::DimensionMismatch, "lp_norm operand must match the outcome count");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += space.probs[i] * std::pow(std::fabs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

ProjectionOperator::ProjectionOperator(const FiniteFilteredSpace& space,
                                       const AttainableSubspace& subspace)
    : probs_(space.probs), frame_(subspace.ortho)
{
}

RandomVariable ProjectionOperator::project(const RandomVariable& x) const
{
    if (x.size() != probs_.size())
        throw Error(Errc::DimensionMismatch, "projection operand must match the outcome count");
    RandomVariable out(x.size(), 0.0);
    for (const auto& q : frame_) {
        double c = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) c += probs_[i] * q[i] * x[i];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * q[i];
    }
    return out;
}

RandomVariable ProjectionOperator::complement(const RandomVariable& x) const
{
    RandomVariable t = project(x);
    RandomVariable out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - t[i];
    return out;
}

double ProjectionOperator::projected_norm(const RandomVariable& x) const
{
    RandomVariable t = project(x);
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += probs_[i] * t[i] * t[i];
    return std::sqrt(s);
}

std::vector<double> project_to_simplex(std::vector<double> w)
{
    const std::size_t n = w.size();
    std::vector<double> u = w;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += u[i];
        double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    for (double& v : w) v = std::max(0.0, v - theta);
    return w;
}

NearestPointResult nearest_point_detail(const RandomVariable& x, const ConvexPolytope& pi,
                                        double p, const FiniteFilteredSpace& space)
{
    if (pi.generators.empty()) throw Error(Errc::EmptySet, "polytope has no generators");
    if (!(p > 1.0 && p <= 2.0))
        throw Error(Errc::InvalidExponent, "nearest_point requires p in (1,2]");
    const std::size_t k = space.probs.size();
    const std::size_t n = pi.generators.size();
    for (const auto& g : pi.generators)
        if (g.size() != k) throw Error(Errc::DimensionMismatch, "generator length mismatch");
    if (x.size() != k) throw Error(Errc::DimensionMismatch, "point length mismatch");

    auto combine = [&](const std::vector<double>& w, RandomVariable& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] == 0.0) continue;
            for (std::size_t i = 0; i < k; ++i) out[i] += w[j] * pi.generators[j][i];
        }
    };

    // A hull member is its own nearest point; the gradient landscape of
    // |.|_p^p degenerates exactly there, so settle membership by LP first.
    if (auto member = hull_membership(x, pi)) {
        NearestPointResult res;
        res.weights = std::move(*member);
        res.point.assign(k, 0.0);
        combine(res.weights, res.point);
        res.iterations = 0;
        return res;
    }
    // eps-smoothed objective sum_i p_i (r_i^2 + eps^2)^{p/2}; eps = 0 is the
    // true map, smooth for p > 1 but with unbounded curvature at small
    // residuals when p < 2.
    RandomVariable y(k, 0.0);
    auto objective = [&](const std::vector<double>& w, double eps) {
        combine(w, y);
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double r = x[i] - y[i];
            s += space.probs[i] * std::pow(r * r + eps * eps, 0.5 * p);
        }
        return s;
    };
    auto gradient = [&](const std::vector<double>& w, double eps, std::vector<double>& g) {
        combine(w, y);
        std::vector<double> dres(k);
        for (std::size_t i = 0; i < k; ++i) {
            double r = x[i] - y[i];
            double m2 = r * r + eps * eps;
            dres[i] = (m2 == 0.0) ? 0.0 : space.probs[i] * p * std::pow(m2, 0.5 * p - 1.0) * r;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += dres[i] * pi.generators[j][i];
            g[j] = -s;
        }
    };

    double energy = 0.0;
    for (const auto& g : pi.generators) {
        double e = 0.0;
        for (std::size_t i = 0; i < k; ++i) e += space.probs[i] * g[i] * g[i];
        energy = std::max(energy, e);
    }
    double x_scale = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        x_scale += space.probs[i] * std::pow(std::fabs(x[i]), p);
    // distance resolution: below this the point itself is converged
    const double f_floor = std::pow(1e-9 * (1.0 + std::pow(x_scale, 1.0 / p)), p);

    struct Stage {
        std::vector<double> w;
        double f = 0.0;
        bool converged = false;
        int iterations = 0;
    };

    // Accelerated projected gradient with backtracking and restart-on-
    // overshoot; the momentum sequence keeps the budget adequate on badly
    // conditioned generator sets.
    auto run_stage = [&](std::vector<double> w0, double eps, int budget) {
        Stage out;
        std::vector<double> w = std::move(w0);
        std::vector<double> w_prev = w, v = w, w_best = w;
        double f = objective(w, eps);
        double f_best = f;
        double step = 1.0 / std::max(1e-12, 2.0 * p * energy * static_cast<double>(n));
        double t_mom = 1.0;
        std::vector<double> grad(n), cand(n);
        int stall = 0, stall_restarts = 0;
        int it = 0;
        for (; it < budget; ++it) {
            if (f_best <= f_floor) { out.converged = true; break; }
            gradient(v, eps, grad);
            double fy = objective(v, eps);
            double s = step;
            double fn = fy;
            bool ok = false;
            for (int bt = 0; bt < 60; ++bt) {
                for (std::size_t j = 0; j < n; ++j) cand[j] = v[j] - s * grad[j];
                cand = project_to_simplex(std::move(cand));
                fn = objective(cand, eps);
                double lin = 0.0, quad = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    double d = cand[j] - v[j];
                    lin += grad[j] * d;
                    quad += d * d;
                }
                if (fn <= fy + lin + quad / (2.0 * s) + 1e-18) { ok = true; break; }
                s *= 0.5;
            }
            const bool at_incumbent = (v == w);
            const double noise = 1e-14 * (1.0 + std::fabs(f_best));
            if (!ok || fn > f_best + noise) {
                if (at_incumbent) { out.converged = true; break; } // rounding floor
                v = w; // restart the plain step from the incumbent
                t_mom = 1.0;
                continue;
            }
            step = s * 1.3;
            double move = 0.0;
            for (std::size_t j = 0; j < n; ++j) move = std::max(move, std::fabs(cand[j] - w[j]));
            double improvement = f - fn;
            w_prev = w;
            w = cand;
            f = fn;
            if (fn < f_best) {
                f_best = fn;
                w_best = w;
            }
            if (std::fabs(improvement) < kObjTol && move < kMoveTol) {
                // stationarity only counts for a plain step from the incumbent;
                // a momentum step clamped by the simplex boundary proves nothing
                if (at_incumbent) { out.converged = true; break; }
                v = w;
                t_mom = 1.0;
                continue;
            }
            double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
            for (std::size_t j = 0; j < n; ++j)
                v[j] = w[j] + ((t_mom - 1.0) / t_next) * (w[j] - w_prev[j]);
            t_mom = t_next;
            stall = (std::fabs(improvement) < 1e-13 * (1.0 + std::fabs(f_best))) ? stall + 1 : 0;
            if (stall >= 128) {
                if (stall_restarts >= 3) { out.converged = true; break; } // plateaued
                ++stall_restarts;
                stall = 0;
                v = w;
                t_mom = 1.0;
            }
        }
        out.w = std::move(w_best);
        out.f = f_best;
        out.iterations = it;
        return out;
    };

    std::vector<double> w_uniform(n, 1.0 / static_cast<double>(n));
    Stage result = run_stage(w_uniform, 0.0, kNearestMaxIter);
    int total_iterations = result.iterations;
    if (!result.converged && p < 2.0) {
        // near-L1 exponents develop exploding curvature where residual
        // components vanish; smooth the kinks away and tighten gradually
        std::vector<double> w = w_uniform;
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8}) {
            Stage st = run_stage(w, eps, 1500);
            w = std::move(st.w);
            total_iterations += st.iterations;
        }
        Stage final_stage = run_stage(w, 0.0, 4000);
        total_iterations += final_stage.iterations;
        if (final_stage.f < result.f || final_stage.converged) result = std::move(final_stage);
    }
    if (!result.converged)
        throw Error(Errc::NoConvergence, "nearest_point iteration budget exhausted");
    std::vector<double> w = std::move(result.w);

    // p = 2 admits an exact finish: solve the equality-constrained least
    // squares on the discovered support, pruning negatives, and adopt the
    // face minimizer when it matches the incumbent value at rounding scale.
    if (p == 2.0) {
        std::vector<std::size_t> sup;
        for (std::size_t j = 0; j < n; ++j)
            if (w[j] > 1e-9) sup.push_back(j);
        for (int round = 0; round < static_cast<int>(n) && !sup.empty(); ++round) {
            const std::size_t m = sup.size();
            Matrix kkt(m + 1, m + 1);
            std::vector<double> rhs(m + 1, 0.0);
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = 0; b <= a; ++b) {
                    double sgg = 0.0;
                    for (std::size_t i = 0; i < k; ++i)
                        sgg += space.probs[i] * pi.generators[sup[a]][i] * pi.generators[sup[b]][i];
                    kkt(a, b) = kkt(b, a) = 2.0 * sgg;
                }
                kkt(a, m) = kkt(m, a) = 1.0;
                double sgx = 0.0;
                for (std::size_t i = 0; i < k; ++i)
                    sgx += space.probs[i] * pi.generators[sup[a]][i] * x[i];
                rhs[a] = 2.0 * sgx;
            }
            rhs[m] = 1.0;
            std::vector<double> sol;
            if (!linalg::lu_solve(kkt, rhs, sol, 1e-13)) break;
            std::size_t worst = m;
            double worst_val = -1e-12;
            for (std::size_t a = 0; a < m; ++a)
                if (sol[a] < worst_val) { worst_val = sol[a]; worst = a; }
            if (worst != m) { // negative weight: drop it and re-solve
                sup.erase(sup.begin() + static_cast<std::ptrdiff_t>(worst));
                continue;
            }
            std::vector<double> polished(n, 0.0);
            double total = 0.0;
            for (std::size_t a = 0; a < m; ++a) {
                polished[sup[a]] = std::max(0.0, sol[a]);
                total += polished[sup[a]];
            }
            for (double& v : polished) v /= total;
            if (objective(polished, 0.0) <= result.f + 1e-12 * (1.0 + std::fabs(result.f)))
                w = polished;
            break;
        }
    }

    NearestPointResult res;
    res.weights = std::move(w);
    res.point.assign(k, 0.0);
    combine(res.weights, res.point);
    res.iterations = total_iterations;
    return res;
}

RandomVariable nearest_point(const RandomVariable& x, const ConvexPolytope& pi, double p,
                             const FiniteFilteredSpace& space)
{
    return nearest_point_detail(x, pi, p, space).point;
}

double dp_distance(const RandomVariable& x, const ConvexPolytope& pi, double p,
                   const FiniteFilteredSpace& space)
{
    NearestPointResult r = nearest_point_detail(x, pi, p, space);
    RandomVariable diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - r.point[i];
    return lp_norm(diff, p, space);
}

} // namespace capreq
