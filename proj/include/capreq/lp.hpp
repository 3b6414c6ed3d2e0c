#pragma once

#include <map>
#include <vector>

#include "capreq/errors.hpp"

namespace capreq {

/// Dense linear program in equality form: minimize objective . x subject to
/// eq_rows x = eq_rhs and x_j >= 0 (or x_j free when free_var[j]).
/// Inequalities are entered through the add_ge / add_le helpers, which
/// append explicit slack columns.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<bool> free_var;

    int num_vars() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(eq_rows.size()); }

    int add_var(double obj_coeff, bool is_free);
    /// coeffs: (var index, coefficient) pairs; unum listed vars get 0.
    void add_eq(const std::map<int, double>& coeffs, double rhs);
    void add_ge(const std::map<int, double>& coeffs, double rhs); // adds surplus column
    void add_le(const std::map<int, double>& coeffs, double rhs); // adds slack column
};

struct SolveStatus {
    enum class Kind { Optimal, Unbounded, Infeasible };
    Kind kind = Kind::Infeasible;
    double value = 0.0;
    std::vector<double> x; // per original variable
    std::vector<double> y; // dual per equality row
    int iterations = 0;

    bool optimal() const { return kind == Kind::Optimal; }
};

/// Two-phase primal simplex on a dense tableau, Bland's anti-cycling rule,
/// pivot tolerance 1e-10. Free variables are split internally. Throws
/// NumericalBreakdown if the pivot tolerance or the iteration cap (1e6) is
/// exhausted.
SolveStatus solve_lp(const LinearProgram& lp);

} // namespace capreq
