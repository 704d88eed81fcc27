#pragma once

#include <optional>
#include <vector>

namespace posg {

/// Dense LP in the form
///   maximize c'x  subject to  A x <= b,  E x = f,  lower <= x (<= upper).
/// Lower bounds default to 0 and must be finite; upper bounds are optional.
struct LinearProgram {
    int num_vars = 0;
    std::vector<double> objective;
    std::vector<std::vector<double>> ineq_a;
    std::vector<double> ineq_b;
    std::vector<std::vector<double>> eq_a;
    std::vector<double> eq_b;
    std::vector<double> lower;
    std::vector<std::optional<double>> upper;

    explicit LinearProgram(int vars = 0) { resize(vars); }

    void resize(int vars) {
        num_vars = vars;
        objective.assign(vars, 0.0);
        lower.assign(vars, 0.0);
        upper.assign(vars, std::nullopt);
    }

    void add_ineq(std::vector<double> row, double rhs) {
        ineq_a.push_back(std::move(row));
        ineq_b.push_back(rhs);
    }
    void add_eq(std::vector<double> row, double rhs) {
        eq_a.push_back(std::move(row));
        eq_b.push_back(rhs);
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> ineq_duals;  // one per inequality row, >= 0
    std::vector<double> eq_duals;    // one per equality row, free sign
    double primal_residual = 0.0;    // max constraint violation at x
    double dual_residual = 0.0;      // max dual feasibility / stationarity violation
    double duality_gap = 0.0;        // |primal objective - dual objective|
    int pivots = 0;
};

/// Two-phase primal simplex on the dense tableau. Bland's rule guards
/// against cycling; the pivot count is capped and numerical_error is thrown
/// if the cap is hit or the certified solution fails verification.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace posg
