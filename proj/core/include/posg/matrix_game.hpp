#pragma once

#include <vector>

namespace posg {

/// Zero-sum matrix game; the row player maximizes, the column player
/// minimizes. Labels are opaque caller identifiers (joint (g', u) indices in
/// the value-iteration use).
struct MatrixGame {
    int rows = 0;
    int cols = 0;
    std::vector<double> payoff;  // row-major
    std::vector<int> row_labels;
    std::vector<int> col_labels;

    double at(int r, int c) const { return payoff[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return payoff[static_cast<std::size_t>(r) * cols + c]; }
};

struct GameSolution {
    double value = 0.0;
    std::vector<double> row_strategy;
    std::vector<double> col_strategy;
};

/// Solves the game by the standard LP pair (one simplex solve; the column
/// strategy comes from the duals). The returned strategies satisfy the
/// saddle-point inequalities against every pure strategy within 1e-8; a
/// violation raises numerical_error.
GameSolution game_value(const MatrixGame& game);

}  // namespace posg
