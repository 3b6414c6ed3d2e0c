#include "capreq/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "capreq/lp.hpp"

namespace capreq {

ScenarioSet make_scenario_set(const FiniteFilteredSpace& space,
                              std::vector<ScenarioGenerator> generators,
                              std::optional<double> norm_cap)
{
    for (const auto& g : generators) {
        check_density(g.density, space);
        if (norm_cap) {
            double nrm = l2_norm(g.density, space);
            if (nrm > *norm_cap + 1e-12)
                throw Error(Errc::NotADensity, "generator norm exceeds the cap");
        }
    }
    ScenarioSet s;
    s.generators = std::move(generators);
    s.norm_cap = norm_cap;
    return s;
}

namespace {

double row_scale(const std::vector<double>& row, double rhs)
{
    double s = rhs * rhs;
    for (double v : row) s += v * v;
    s = std::sqrt(s);
    return s > 0.0 ? s : 1.0;
}

} // namespace

double f_tilde(const RandomVariable& y, const ScenarioSet& scen, const FiniteFilteredSpace& space)
{
    if (scen.generators.empty()) throw Error(Errc::EmptySet, "scenario set has no generators");
    const int k = space.num_outcomes();
    if (static_cast<int>(y.size()) != k)
        throw Error(Errc::DimensionMismatch, "target point length mismatch");
    const int n = scen.size();

    LinearProgram lp;
    for (int i = 0; i < n; ++i) lp.add_var(-scen.generators[i].floor, false); // maximize
    for (int r = 0; r < k; ++r) {
        std::vector<double> row(n);
        for (int i = 0; i < n; ++i) row[i] = scen.generators[i].density[r];
        double sc = row_scale(row, y[r]);
        std::map<int, double> coeffs;
        for (int i = 0; i < n; ++i) coeffs[i] = row[i] / sc;
        lp.add_eq(coeffs, y[r] / sc);
    }
    {
        std::map<int, double> coeffs;
        double sc = std::sqrt(static_cast<double>(n) + 1.0);
        for (int i = 0; i < n; ++i) coeffs[i] = 1.0 / sc;
        lp.add_eq(coeffs, 1.0 / sc);
    }
    SolveStatus st = solve_lp(lp);
    if (st.kind == SolveStatus::Kind::Infeasible)
        throw Error(Errc::NotInHull, "point has no convex representation by the generators");
    return -st.value;
}

RandomVariable MartingalePolytope::density_of(const std::vector<double>& lambda) const
{
    RandomVariable z(probs.size(), 0.0);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] == 0.0) continue;
        for (std::size_t r = 0; r < z.size(); ++r) z[r] += lambda[i] * generators[i].density[r];
    }
    return z;
}

MartingalePolytope martingale_polytope(const ScenarioSet& scen, const AttainableSubspace& g,
                                       const FiniteFilteredSpace& space)
{
    MartingalePolytope poly;
    poly.generators = scen.generators;
    poly.probs = space.probs;
    const int n = scen.size();
    const int d = g.dimension();
    poly.constraint = Matrix(d, n);
    for (int j = 0; j < d; ++j) {
        std::vector<double> row(n);
        for (int i = 0; i < n; ++i) row[i] = inner(g.basis[j], scen.generators[i].density, space);
        double sc = row_scale(row, 0.0);
        for (int i = 0; i < n; ++i) poly.constraint(j, i) = row[i] / sc;
    }
    return poly;
}

namespace {

LinearProgram polytope_lp(const MartingalePolytope& poly, const std::vector<double>& objective)
{
    const int n = static_cast<int>(poly.generators.size());
    LinearProgram lp;
    for (int i = 0; i < n; ++i) lp.add_var(objective.empty() ? 0.0 : objective[i], false);
    {
        std::map<int, double> coeffs;
        double sc = std::sqrt(static_cast<double>(n));
        for (int i = 0; i < n; ++i) coeffs[i] = 1.0 / sc;
        lp.add_eq(coeffs, 1.0 / sc);
    }
    for (std::size_t j = 0; j < poly.constraint.rows; ++j) {
        std::map<int, double> coeffs;
        for (int i = 0; i < n; ++i) coeffs[i] = poly.constraint(j, static_cast<std::size_t>(i));
        lp.add_eq(coeffs, 0.0);
    }
    return lp;
}

} // namespace

std::optional<std::vector<double>> polytope_feasible_point(const MartingalePolytope& poly)
{
    if (poly.generators.empty()) return std::nullopt;
    SolveStatus st = solve_lp(polytope_lp(poly, {}));
    if (!st.optimal()) return std::nullopt;
    return st.x;
}

SupFloorResult sup_f_tilde_over_Z(const MartingalePolytope& poly)
{
    SupFloorResult res;
    if (poly.generators.empty()) {
        res.empty = true;
        return res;
    }
    const int n = static_cast<int>(poly.generators.size());
    std::vector<double> obj(n);
    for (int i = 0; i < n; ++i) obj[i] = -poly.generators[i].floor; // maximize
    SolveStatus st = solve_lp(polytope_lp(poly, obj));
    if (st.kind == SolveStatus::Kind::Infeasible) {
        res.empty = true;
        return res;
    }
    if (st.kind == SolveStatus::Kind::Unbounded)
        throw Error(Errc::NumericalBreakdown, "bounded LP reported unbounded");
    res.value = -st.value;
    res.weights = st.x;
    return res;
}

std::vector<std::vector<double>> polytope_vertices(const MartingalePolytope& poly, long long budget)
{
    const int n = static_cast<int>(poly.generators.size());
    if (n == 0) return {};
    const std::size_t mrows = poly.constraint.rows + 1;

    Matrix a(mrows, static_cast<std::size_t>(n));
    std::vector<double> b(mrows, 0.0);
    for (int i = 0; i < n; ++i) a(0, static_cast<std::size_t>(i)) = 1.0;
    b[0] = 1.0;
    for (std::size_t j = 0; j + 1 < mrows; ++j)
        for (int i = 0; i < n; ++i)
            a(j + 1, static_cast<std::size_t>(i)) = poly.constraint(j, static_cast<std::size_t>(i));

    const std::size_t r = linalg::rank(a);
    if (r == 0) return {};

    // subset count check before enumerating
    long double count = 1.0L;
    for (std::size_t i = 0; i < r; ++i) count = count * static_cast<long double>(n - i) / static_cast<long double>(i + 1);
    if (count > static_cast<long double>(budget))
        throw Error(Errc::Unsupported, "vertex enumeration budget exceeded");

    std::vector<std::vector<double>> verts;
    std::vector<int> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = static_cast<int>(i);

    auto try_subset = [&]() {
        Matrix sys(r, r);
        std::vector<double> rhs(r, 0.0);
        // least-squares-free approach: pick r rows of A restricted to the
        // subset that are independent; here we use normal equations instead,
        // which keeps the solve square for any row count.
        Matrix asub(mrows, r);
        for (std::size_t row = 0; row < mrows; ++row)
            for (std::size_t c = 0; c < r; ++c) asub(row, c) = a(row, static_cast<std::size_t>(idx[c]));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                double s = 0.0;
                for (std::size_t row = 0; row < mrows; ++row) s += asub(row, i) * asub(row, j);
                sys(i, j) = s;
            }
        for (std::size_t i = 0; i < r; ++i) {
            double s = 0.0;
            for (std::size_t row = 0; row < mrows; ++row) s += asub(row, i) * b[row];
            rhs[i] = s;
        }
        std::vector<double> sol;
        if (!linalg::lu_solve(sys, rhs, sol, 1e-12)) return;
        // consistency of the full system and nonnegativity
        for (std::size_t row = 0; row < mrows; ++row) {
            double s = -b[row];
            for (std::size_t c = 0; c < r; ++c) s += asub(row, c) * sol[c];
            if (std::fabs(s) > 1e-8) return;
        }
        for (double v : sol)
            if (v < -1e-9) return;
        std::vector<double> lambda(n, 0.0);
        for (std::size_t c = 0; c < r; ++c) lambda[static_cast<std::size_t>(idx[c])] = std::max(0.0, sol[c]);
        for (const auto& seen : verts) {
            double diff = 0.0;
            for (int i = 0; i < n; ++i) diff = std::max(diff, std::fabs(seen[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(i)]));
            if (diff < 1e-9) return;
        }
        verts.push_back(std::move(lambda));
    };

    while (true) {
        try_subset();
        // next combination of size r from {0..n-1}
        int pos = static_cast<int>(r) - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<int>(r) + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (std::size_t q = static_cast<std::size_t>(pos) + 1; q < r; ++q)
            idx[q] = idx[q - 1] + 1;
    }
    return verts;
}

} // namespace capreq
