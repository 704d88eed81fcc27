#pragma once

#include <vector>

#include "posg/posg.hpp"

namespace posg {

/// The M x N grid family. State s_i sits at (x, y) with i = x + M*y.
/// Defender actions R, L, U, D; adversary actions A (attack), NA.
/// A move succeeds with p_move_na (p_move_a under attack); the residual mass
/// is spread uniformly over the current cell and its in-grid neighbors minus
/// the move target. A move off the grid is a certain self-loop.
/// Observations are {correct, wrong} with state-uniform kernels; with
/// perfect_obs_on_labeled the defender observes labeled cells (obstacle or
/// target) correctly with probability one.
struct GridConfig {
    int width = 3;
    int height = 2;
    std::vector<int> obstacles;
    std::vector<int> targets;
    double p_d_correct = 0.8;
    double p_a_correct = 0.6;
    double p_move_na = 0.8;
    double p_move_a = 0.6;
    bool perfect_obs_on_labeled = false;
};

Posg grid_world(const GridConfig& config);

}  // namespace posg
