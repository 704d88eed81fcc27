#pragma once

#include <vector>

#include "posg/chain.hpp"
#include "posg/matrix_game.hpp"
#include "posg/product.hpp"
#include "posg/structure_search.hpp"

namespace posg {

enum class SweepVariant {
    plain,    // update every state each sweep
    guarded,  // update only when the backed-up value exceeds (1+eps) * current
};

struct ValueIterationOptions {
    double epsilon = 1e-6;
    SweepVariant variant = SweepVariant::plain;
    int threads = 1;
    int max_sweeps = 200000;
};

struct ValueIterationResult {
    std::vector<double> value;  // per chain state, in [0, 1]
    int sweeps = 0;             // update sweeps performed
    bool converged = false;
    bool no_feasible_recurrent_set = false;

    // Per chain state: the equilibrium local kernels over joint labels
    // (defender rows, adversary columns of the final state game). States in
    // the feasible recurrent set and states that cannot reach it keep their
    // uniform-over-mask rows.
    std::vector<std::vector<int>> defender_labels;
    std::vector<std::vector<double>> defender_strategy;
    std::vector<std::vector<int>> adversary_labels;
    std::vector<std::vector<double>> adversary_strategy;

    std::vector<char> recset;            // chain states initialized (and clamped) to 1
    double v_min_nonzero = 1.0;          // smallest nonzero iterate entry observed
    double max_monotonicity_violation = 0.0;  // worst pre-clamp decrease (float dust)
    double final_residual = 0.0;         // max |TV - V| over updated states at exit
};

/// The per-state game the sweep solves: rows are structure-allowed defender
/// labels (g', u) at (g_d, s), columns the adversary labels at (g_a, s), and
/// each entry backs up the value through the product kernel for that joint
/// action choice.
MatrixGame state_game(const ProductPosg& product, const StructurePair& structures,
                      const std::vector<double>& value, const Gmc& gmc, int state);

/// Stackelberg max-min value iteration over the chain induced by the
/// structure pair. Values start at one on the feasible recurrent states and
/// at zero elsewhere, every sweep is monotone nondecreasing, and iteration
/// stops when the sup-norm increment drops to epsilon. The guarded variant
/// suppresses updates below the (1+eps) multiplicative threshold, which
/// bounds the number of update sweeps by termination_bound.
///
/// The feasible recurrent sets are pinned by a concrete controller pair;
/// by default the uniform instantiation of the structure masks. Controller
/// growth passes the grown concrete pair instead, so freshly added nodes
/// (not yet wired into anything) do not disturb the recurrence structure.
ValueIterationResult value_iterate(const ProductPosg& product, const StructurePair& structures,
                                   const ValueIterationOptions& options = {},
                                   const Fsc* recset_fsc_d = nullptr,
                                   const Fsc* recset_fsc_a = nullptr);

/// ceil(|S||Q||G_d||G_a| * log(1 / v_min) / log(1 + eps)).
/// Throws validation_error on nonpositive eps or v_min outside (0, 1].
long long termination_bound(int num_model_states, int num_dra_states, int num_gd, int num_ga,
                            double epsilon, double v_min);

struct RealizedPolicies {
    Fsc fsc_d;
    Fsc fsc_a;
    double residual_d = 0.0;  // least-squares defect of the kernel recovery
    double residual_a = 0.0;
};

/// Recovers observation-conditioned controllers from the per-state
/// equilibrium strategies. The (g, s) kernel is read at the canonical chain
/// state (s, delta(q0, L(s)), g, other agent's initial node); observation
/// rows solve mu_hat = O mu by least squares and project onto the simplex
/// over mask-allowed labels.
RealizedPolicies realize_policies(const ProductPosg& product, const StructurePair& structures,
                                  const ValueIterationResult& result);

}  // namespace posg
