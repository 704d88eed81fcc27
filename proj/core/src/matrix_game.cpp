#include "posg/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "posg/errors.hpp"
#include "posg/simplex.hpp"

namespace posg {

GameSolution game_value(const MatrixGame& game) {
    const int m = game.rows, n = game.cols;
    if (m < 1 || n < 1) throw validation_error("matrix game needs at least one row and column");
    for (double v : game.payoff)
        if (!std::isfinite(v)) throw validation_error("matrix game has a non-finite entry");

    // Shift so all entries are >= 1; the game value shifts by the same
    // constant and the optimal strategies are unchanged.
    double lo = *std::min_element(game.payoff.begin(), game.payoff.end());
    const double shift = 1.0 - lo;

    // Variables x_0..x_{m-1}, v. Maximize v subject to
    //   v - sum_i B[i][j] x_i <= 0 for every column j, sum_i x_i = 1.
    LinearProgram lp(m + 1);
    lp.objective[m] = 1.0;
    for (int j = 0; j < n; ++j) {
        std::vector<double> row(m + 1, 0.0);
        for (int i = 0; i < m; ++i) row[i] = -(game.at(i, j) + shift);
        row[m] = 1.0;
        lp.add_ineq(std::move(row), 0.0);
    }
    std::vector<double> ones(m + 1, 1.0);
    ones[m] = 0.0;
    lp.add_eq(std::move(ones), 1.0);

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw numerical_error("matrix game LP did not solve");

    GameSolution out;
    out.value = sol.value - shift;
    out.row_strategy.assign(sol.x.begin(), sol.x.begin() + m);
    out.col_strategy = sol.ineq_duals;

    // Clean tiny negatives and renormalize both strategies.
    auto normalize = [](std::vector<double>& dist) {
        double total = 0.0;
        for (double& p : dist) {
            if (p < 0.0) p = 0.0;
            total += p;
        }
        if (total <= 0.0) throw numerical_error("matrix game produced a zero strategy");
        for (double& p : dist) p /= total;
    };
    normalize(out.row_strategy);
    normalize(out.col_strategy);

    // Saddle-point verification against every pure strategy.
    double worst_col = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        double payoff = 0.0;
        for (int i = 0; i < m; ++i) payoff += out.row_strategy[i] * game.at(i, j);
        worst_col = std::min(worst_col, payoff);
    }
    double best_row = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        double payoff = 0.0;
        for (int j = 0; j < n; ++j) payoff += out.col_strategy[j] * game.at(i, j);
        best_row = std::max(best_row, payoff);
    }
    if (worst_col < out.value - 1e-8 || best_row > out.value + 1e-8)
        throw numerical_error("matrix game saddle verification failed");
    return out;
}

}  // namespace posg
