#include "capreq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capreq {

namespace {
constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9; // phase-1 optimum at/below this counts as feasible
constexpr long kMaxPivots = 1000000;
} // namespace

int LinearProgram::add_var(double obj_coeff, bool is_free)
{
    objective.push_back(obj_coeff);
    free_var.push_back(is_free);
    for (auto& row : eq_rows) row.push_back(0.0);
    return static_cast<int>(objective.size()) - 1;
}

void LinearProgram::add_eq(const std::map<int, double>& coeffs, double rhs)
{
    std::vector<double> row(objective.size(), 0.0);
    for (auto [j, c] : coeffs) row.at(static_cast<std::size_t>(j)) = c;
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_ge(const std::map<int, double>& coeffs, double rhs)
{
    int s = add_var(0.0, false);
    auto c = coeffs;
    c[s] = -1.0;
    add_eq(c, rhs);
}

void LinearProgram::add_le(const std::map<int, double>& coeffs, double rhs)
{
    int s = add_var(0.0, false);
    auto c = coeffs;
    c[s] = 1.0;
    add_eq(c, rhs);
}

namespace {

/// Dense tableau simplex state. Columns: split internal variables first,
/// then one artificial per row (kept around after phase 1 because their
/// columns carry B^{-1}, which is what the dual extraction reads).
struct Tableau {
    int m = 0, ncols = 0, nreal = 0;
    std::vector<std::vector<double>> t; // m rows, ncols + 1 (rhs last)
    std::vector<double> cost;           // reduced-cost row, ncols entries
    double obj_shift = 0.0;             // negative of current objective value
    std::vector<int> basis;             // basic column per row
    std::vector<char> banned;           // columns barred from entering
    long pivots = 0;
    long stalled = 0;   // consecutive pivots without objective progress
    bool bland = false; // anti-cycling mode while degenerate

    double rhs(int r) const { return t[r][ncols]; }

    void pivot(int r, int j)
    {
        double piv = t[r][j];
        for (int q = 0; q <= ncols; ++q) t[r][q] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double f = t[i][j];
            if (f == 0.0) continue;
            for (int q = 0; q <= ncols; ++q) t[i][q] -= f * t[r][q];
        }
        double f = cost[j];
        if (f != 0.0) {
            for (int q = 0; q < ncols; ++q) cost[q] -= f * t[r][q];
            obj_shift -= f * t[r][ncols];
        }
        basis[r] = j;
        if (++pivots > kMaxPivots)
            throw Error(Errc::NumericalBreakdown, "simplex pivot cap exhausted");
    }

    /// One pivot. Dantzig pricing while the objective moves; Bland's
    /// smallest-index rule takes over through degenerate stretches, which
    /// is what rules out cycling. Returns 0 on optimal, 1 after a pivot,
    /// -1 on an unbounded entering column.
    int step()
    {
        int enter = -1;
        if (bland) {
            for (int j = 0; j < ncols; ++j)
                if (!banned[j] && cost[j] < -kPivotTol) { enter = j; break; }
        } else {
            double best_rc = -kPivotTol;
            for (int j = 0; j < ncols; ++j)
                if (!banned[j] && cost[j] < best_rc) { best_rc = cost[j]; enter = j; }
        }
        if (enter < 0) return 0;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < m; ++r) {
            if (t[r][enter] > kPivotTol) {
                double ratio = t[r][ncols] / t[r][enter];
                double tie = 1e-12 * (1.0 + std::fabs(best));
                if (ratio < best - tie ||
                    (ratio <= best + tie && (leave < 0 || basis[r] < basis[leave]))) {
                    best = std::min(best, ratio);
                    leave = r;
                }
            }
        }
        if (leave < 0) return -1;
        const double obj_before = obj_shift;
        pivot(leave, enter);
        if (std::fabs(obj_shift - obj_before) > 1e-13 * (1.0 + std::fabs(obj_shift))) {
            stalled = 0;
            bland = false;
        } else if (++stalled > 2 * m + 10) {
            bland = true;
        }
        return 1;
    }
};

} // namespace

SolveStatus solve_lp(const LinearProgram& lp)
{
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    for (double c : lp.objective)
        if (!std::isfinite(c)) throw Error(Errc::NumericalBreakdown, "non-finite objective");

    // internal columns: x_j (and a mirror -x_j when free)
    std::vector<int> pos_col(n), neg_col(n, -1);
    int nreal = 0;
    for (int j = 0; j < n; ++j) pos_col[j] = nreal++;
    for (int j = 0; j < n; ++j)
        if (lp.free_var[j]) neg_col[j] = nreal++;

    Tableau tb;
    tb.m = m;
    tb.nreal = nreal;
    tb.ncols = nreal + m;
    tb.t.assign(m, std::vector<double>(tb.ncols + 1, 0.0));
    tb.basis.resize(m);
    tb.banned.assign(tb.ncols, 0);

    std::vector<int> row_sign(m, 1);
    for (int i = 0; i < m; ++i) {
        double b = lp.eq_rhs[i];
        int sgn = (b < 0.0) ? -1 : 1;
        row_sign[i] = sgn;
        for (int j = 0; j < n; ++j) {
            double a = sgn * lp.eq_rows[i][j];
            tb.t[i][pos_col[j]] = a;
            if (neg_col[j] >= 0) tb.t[i][neg_col[j]] = -a;
        }
        tb.t[i][nreal + i] = 1.0; // artificial
        tb.t[i][tb.ncols] = sgn * b;
        tb.basis[i] = nreal + i;
    }

    // phase 1: minimize the artificial sum
    tb.cost.assign(tb.ncols, 0.0);
    tb.obj_shift = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int q = 0; q < tb.ncols; ++q) tb.cost[q] -= tb.t[i][q];
        tb.obj_shift -= tb.t[i][tb.ncols];
    }
    for (int i = 0; i < m; ++i) tb.cost[nreal + i] = 0.0;

    while (true) {
        int s = tb.step();
        if (s == 0) break;
        if (s < 0) throw Error(Errc::NumericalBreakdown, "phase-1 column unbounded");
    }
    double phase1 = -tb.obj_shift;
    if (phase1 > kFeasTol) {
        SolveStatus st;
        st.kind = SolveStatus::Kind::Infeasible;
        st.iterations = static_cast<int>(tb.pivots);
        return st;
    }

    // remove artificials from the basis where a real pivot exists; rows with
    // none are redundant and stay frozen at zero
    for (int r = 0; r < m; ++r) {
        if (tb.basis[r] < nreal) continue;
        int j = -1;
        for (int q = 0; q < nreal; ++q)
            if (std::fabs(tb.t[r][q]) > kPivotTol) { j = q; break; }
        if (j >= 0) tb.pivot(r, j);
    }
    for (int i = 0; i < m; ++i) tb.banned[nreal + i] = 1;

    // phase 2: real objective over the internal columns
    std::vector<double> c_int(tb.ncols, 0.0);
    for (int j = 0; j < n; ++j) {
        c_int[pos_col[j]] = lp.objective[j];
        if (neg_col[j] >= 0) c_int[neg_col[j]] = -lp.objective[j];
    }
    tb.cost = c_int;
    tb.obj_shift = 0.0;
    tb.stalled = 0;
    tb.bland = false;
    for (int r = 0; r < m; ++r) {
        double cb = c_int[tb.basis[r]];
        if (cb == 0.0) continue;
        for (int q = 0; q < tb.ncols; ++q) tb.cost[q] -= cb * tb.t[r][q];
        tb.obj_shift -= cb * tb.t[r][tb.ncols];
    }

    while (true) {
        int s = tb.step();
        if (s == 0) break;
        if (s < 0) {
            SolveStatus st;
            st.kind = SolveStatus::Kind::Unbounded;
            st.iterations = static_cast<int>(tb.pivots);
            return st;
        }
    }

    SolveStatus st;
    st.kind = SolveStatus::Kind::Optimal;
    st.iterations = static_cast<int>(tb.pivots);
    std::vector<double> xi(tb.ncols, 0.0);
    for (int r = 0; r < m; ++r) xi[tb.basis[r]] = tb.rhs(r);
    st.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        st.x[j] = xi[pos_col[j]];
        if (neg_col[j] >= 0) st.x[j] -= xi[neg_col[j]];
    }
    st.value = 0.0;
    for (int j = 0; j < n; ++j) st.value += lp.objective[j] * st.x[j];

    // duals: y = c_B^T B^{-1}; artificial column i holds B^{-1} e_i
    st.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double yi = 0.0;
        for (int r = 0; r < m; ++r) yi += c_int[tb.basis[r]] * tb.t[r][nreal + i];
        st.y[i] = row_sign[i] * yi;
    }
    return st;
}

} // namespace capreq
