#include "posg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posg/errors.hpp"

namespace posg {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-8;

// Standard-form working problem after shifting and row scaling:
//   maximize c'y,  rows  a y <= rhs  or  a y = rhs,  y >= 0,  rhs >= 0.
struct Standard {
    int num_vars = 0;
    std::vector<std::vector<double>> a;
    std::vector<double> rhs;
    std::vector<char> is_eq;
    std::vector<double> scale;   // +1 or -1 applied to the original row
    std::vector<int> origin;     // >=0: inequality index; <0: ~encoded equality index
    std::vector<double> c;
};

class Tableau {
public:
    explicit Tableau(const Standard& p) : m_(static_cast<int>(p.a.size())), nv_(p.num_vars) {
        helper_col_.resize(m_);
        int cols = nv_;
        for (int i = 0; i < m_; ++i) helper_col_[i] = cols++;
        ncols_ = cols;
        artificial_col_.assign(ncols_, 0);
        for (int i = 0; i < m_; ++i)
            if (p.is_eq[i]) artificial_col_[helper_col_[i]] = 1;

        a_.assign(static_cast<std::size_t>(m_) * ncols_, 0.0);
        rhs_ = p.rhs;
        basis_.resize(m_);
        in_basis_.assign(ncols_, 0);
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < nv_; ++j) at(i, j) = p.a[i][j];
            at(i, helper_col_[i]) = 1.0;
            basis_[i] = helper_col_[i];
            in_basis_[helper_col_[i]] = 1;
        }

        cost2_.assign(ncols_, 0.0);
        for (int j = 0; j < nv_; ++j) cost2_[j] = p.c[j];
        cost1_.assign(ncols_, 0.0);
        for (int j = 0; j < ncols_; ++j)
            if (artificial_col_[j]) cost1_[j] = -1.0;

        z1_.assign(ncols_, 0.0);
        z2_.assign(ncols_, 0.0);
        recompute_reduced(cost1_, z1_, z1_rhs_);
        recompute_reduced(cost2_, z2_, z2_rhs_);
    }

    // Pivots until no reduced cost is improving. Returns false when an
    // improving column has no blocking row (unbounded ray).
    bool optimize(bool phase_one, int& pivot_budget) {
        for (;;) {
            std::vector<double>& z = phase_one ? z1_ : z2_;
            int entering = -1;
            for (int j = 0; j < ncols_; ++j) {
                if (in_basis_[j]) continue;
                if (!phase_one && artificial_col_[j]) continue;
                if (z[j] < -kPivotTol) {
                    entering = j;  // Bland: smallest eligible index
                    break;
                }
            }
            if (entering < 0) return true;
            int leaving_row = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                double coeff = at(i, entering);
                if (coeff <= kPivotTol) continue;
                double ratio = rhs_[i] / coeff;
                if (ratio < best_ratio - kPivotTol) {
                    best_ratio = ratio;
                    leaving_row = i;
                } else if (ratio < best_ratio + kPivotTol && leaving_row >= 0 &&
                           basis_[i] < basis_[leaving_row]) {
                    leaving_row = i;  // Bland tie-break on the leaving variable
                }
            }
            if (leaving_row < 0) return false;
            pivot(leaving_row, entering);
            if (--pivot_budget <= 0) throw numerical_error("simplex pivot budget exhausted");
        }
    }

    double phase_one_value() const { return z1_rhs_; }

    void drive_out_artificials(int& pivot_budget) {
        for (int i = 0; i < m_; ++i) {
            if (!artificial_col_[basis_[i]]) continue;
            int col = -1;
            for (int j = 0; j < ncols_ && col < 0; ++j)
                if (!artificial_col_[j] && !in_basis_[j] && std::abs(at(i, j)) > kPivotTol) col = j;
            if (col >= 0) {
                // Degenerate pivot: the row value is zero at phase-1 optimum.
                pivot(i, col);
                if (--pivot_budget <= 0) throw numerical_error("simplex pivot budget exhausted");
            }
        }
    }

    std::vector<double> primal() const {
        std::vector<double> y(nv_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < nv_) y[basis_[i]] = rhs_[i];
        return y;
    }

    // Phase-2 reduced cost of a helper column; helper costs are zero, so this
    // equals the dual of the row in the scaled system.
    double dual_of_row(int row) const { return z2_[helper_col_[row]]; }

private:
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * ncols_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * ncols_ + j]; }

    void recompute_reduced(const std::vector<double>& cost, std::vector<double>& z, double& z_rhs) {
        for (int j = 0; j < ncols_; ++j) {
            double v = -cost[j];
            for (int i = 0; i < m_; ++i) v += cost[basis_[i]] * at(i, j);
            z[j] = v;
        }
        z_rhs = 0.0;
        for (int i = 0; i < m_; ++i) z_rhs += cost[basis_[i]] * rhs_[i];
    }

    void pivot(int row, int col) {
        double p = at(row, col);
        for (int j = 0; j < ncols_; ++j) at(row, j) /= p;
        rhs_[row] /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == row) continue;
            double factor = at(i, col);
            if (factor == 0.0) continue;
            for (int j = 0; j < ncols_; ++j) at(i, j) -= factor * at(row, j);
            rhs_[i] -= factor * rhs_[row];
            if (rhs_[i] < 0.0 && rhs_[i] > -1e-12) rhs_[i] = 0.0;
        }
        double f1 = z1_[col];
        if (f1 != 0.0) {
            for (int j = 0; j < ncols_; ++j) z1_[j] -= f1 * at(row, j);
            z1_rhs_ -= f1 * rhs_[row];
        }
        double f2 = z2_[col];
        if (f2 != 0.0) {
            for (int j = 0; j < ncols_; ++j) z2_[j] -= f2 * at(row, j);
            z2_rhs_ -= f2 * rhs_[row];
        }
        in_basis_[basis_[row]] = 0;
        in_basis_[col] = 1;
        basis_[row] = col;
    }

    int m_, nv_, ncols_ = 0;
    std::vector<double> a_, rhs_;
    std::vector<int> basis_, helper_col_;
    std::vector<char> in_basis_, artificial_col_;
    std::vector<double> cost1_, cost2_, z1_, z2_;
    double z1_rhs_ = 0.0, z2_rhs_ = 0.0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const int nv = lp.num_vars;
    for (const auto& row : lp.ineq_a)
        if (static_cast<int>(row.size()) != nv) throw validation_error("LP row width mismatch");
    for (const auto& row : lp.eq_a)
        if (static_cast<int>(row.size()) != nv) throw validation_error("LP row width mismatch");
    for (int j = 0; j < nv; ++j)
        if (lp.upper[j] && *lp.upper[j] < lp.lower[j] - kFeasTol)
            throw validation_error("LP bounds are inconsistent");

    // Shift to y = x - lower >= 0 and materialize upper bounds as rows.
    Standard p;
    p.num_vars = nv;
    p.c.assign(nv, 0.0);
    double objective_shift = 0.0;
    for (int j = 0; j < nv; ++j) {
        p.c[j] = lp.objective[j];
        objective_shift += lp.objective[j] * lp.lower[j];
    }

    auto add_row = [&](const std::vector<double>& coeff, double rhs, bool is_eq, int origin) {
        double shifted = rhs;
        for (int j = 0; j < nv; ++j) shifted -= coeff[j] * lp.lower[j];
        double scale = 1.0;
        if (shifted < 0.0) {
            scale = -1.0;
            shifted = -shifted;
        }
        std::vector<double> row(nv);
        for (int j = 0; j < nv; ++j) row[j] = scale * coeff[j];
        p.a.push_back(std::move(row));
        p.rhs.push_back(shifted);
        p.is_eq.push_back(is_eq ? 1 : 0);
        p.scale.push_back(scale);
        p.origin.push_back(origin);
    };

    const int num_ineq = static_cast<int>(lp.ineq_a.size());
    for (int r = 0; r < num_ineq; ++r) add_row(lp.ineq_a[r], lp.ineq_b[r], false, r);
    for (int j = 0; j < nv; ++j)
        if (lp.upper[j]) {
            std::vector<double> row(nv, 0.0);
            row[j] = 1.0;
            add_row(row, *lp.upper[j], false, num_ineq);  // origin folds into no reported dual
        }
    const int num_eq = static_cast<int>(lp.eq_a.size());
    for (int r = 0; r < num_eq; ++r) add_row(lp.eq_a[r], lp.eq_b[r], true, -1 - r);

    // A flipped inequality (scale -1) reads  -a y <= -b  with -b < 0 before
    // scaling, i.e. a y >= b in the nonnegative-rhs form. Express it as the
    // equality  (scaled a) y - s = rhs  with a fresh surplus s >= 0; the row
    // then takes an artificial like any equality.
    for (std::size_t r = 0; r < p.a.size(); ++r) {
        if (p.is_eq[r] || p.scale[r] > 0) continue;
        for (auto& row : p.a) row.push_back(0.0);
        p.a[r][p.num_vars] = -1.0;
        p.c.push_back(0.0);
        ++p.num_vars;
        p.is_eq[r] = 1;
    }

    LpSolution solution;
    solution.x.assign(nv, 0.0);
    solution.ineq_duals.assign(num_ineq, 0.0);
    solution.eq_duals.assign(num_eq, 0.0);

    const int m = static_cast<int>(p.a.size());
    const int initial_budget = 5000 + 500 * (m + p.num_vars);
    int pivot_budget = initial_budget;
    Tableau tableau(p);

    bool has_artificial = false;
    for (int i = 0; i < m; ++i)
        if (p.is_eq[i]) has_artificial = true;
    if (has_artificial) {
        if (!tableau.optimize(true, pivot_budget))
            throw numerical_error("phase-1 subproblem unbounded");
        if (tableau.phase_one_value() < -kFeasTol) {
            solution.status = LpStatus::infeasible;
            return solution;
        }
        tableau.drive_out_artificials(pivot_budget);
    }
    if (!tableau.optimize(false, pivot_budget)) {
        solution.status = LpStatus::unbounded;
        return solution;
    }
    solution.pivots = initial_budget - pivot_budget;

    std::vector<double> y = tableau.primal();
    for (int j = 0; j < nv; ++j) solution.x[j] = lp.lower[j] + y[j];
    solution.value = objective_shift;
    for (int j = 0; j < nv; ++j) solution.value += lp.objective[j] * y[j];

    double dual_objective = objective_shift;
    for (int i = 0; i < m; ++i) {
        double scaled_dual = tableau.dual_of_row(i);
        dual_objective += scaled_dual * p.rhs[i];
        double dual = scaled_dual * p.scale[i];
        int origin = p.origin[i];
        if (origin >= 0 && origin < num_ineq)
            solution.ineq_duals[origin] = dual;
        else if (origin < 0)
            solution.eq_duals[-1 - origin] = dual;
    }

    double primal_residual = 0.0;
    for (int r = 0; r < num_ineq; ++r) {
        double lhs = 0.0;
        for (int j = 0; j < nv; ++j) lhs += lp.ineq_a[r][j] * solution.x[j];
        primal_residual = std::max(primal_residual, lhs - lp.ineq_b[r]);
    }
    for (int r = 0; r < num_eq; ++r) {
        double lhs = 0.0;
        for (int j = 0; j < nv; ++j) lhs += lp.eq_a[r][j] * solution.x[j];
        primal_residual = std::max(primal_residual, std::abs(lhs - lp.eq_b[r]));
    }
    for (int j = 0; j < nv; ++j) {
        primal_residual = std::max(primal_residual, lp.lower[j] - solution.x[j]);
        if (lp.upper[j]) primal_residual = std::max(primal_residual, solution.x[j] - *lp.upper[j]);
    }
    solution.primal_residual = std::max(primal_residual, 0.0);
    solution.duality_gap = std::abs(solution.value - dual_objective);

    double dual_residual = 0.0;
    for (double d : solution.ineq_duals) dual_residual = std::max(dual_residual, -d);
    solution.dual_residual = dual_residual;

    if (solution.primal_residual > 1e-6 || solution.duality_gap > 1e-6)
        throw numerical_error("simplex verification failed");
    solution.status = LpStatus::optimal;
    return solution;
}

}  // namespace posg
