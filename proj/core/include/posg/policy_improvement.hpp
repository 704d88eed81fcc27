#pragma once

#include <vector>

#include "posg/product.hpp"
#include "posg/structure_search.hpp"
#include "posg/value_iteration.hpp"

namespace posg {

/// Probability vector over model states.
using Belief = std::vector<double>;

/// Per-defender-node linear value functions over model states (the alpha
/// vectors); the belief value is their point-wise maximum.
struct NodeValueSet {
    int num_nodes = 0;
    int num_states = 0;
    std::vector<double> values;  // node-major: values[g * num_states + s]

    double node_value(int node, const Belief& belief) const {
        double v = 0.0;
        for (int s = 0; s < num_states; ++s)
            v += belief[s] * values[static_cast<std::size_t>(node) * num_states + s];
        return v;
    }
    double value(const Belief& belief) const {
        double best = node_value(0, belief);
        for (int g = 1; g < num_nodes; ++g) best = std::max(best, node_value(g, belief));
        return best;
    }
    int argmax_node(const Belief& belief) const {
        int best = 0;
        double best_value = node_value(0, belief);
        for (int g = 1; g < num_nodes; ++g) {
            double v = node_value(g, belief);
            if (v > best_value) {
                best_value = v;
                best = g;
            }
        }
        return best;
    }
    double at(int node, int s) const {
        return values[static_cast<std::size_t>(node) * num_states + s];
    }
};

/// Reads the defender node vectors out of a converged value vector: for each
/// model state s the chain state (s, delta(q0, L(s)), g, adversary initial
/// node) is sampled. This is the marginalization that moves from chain
/// values to beliefs over model states.
NodeValueSet extract_node_values(const ProductPosg& product, const StructurePair& structures,
                                 const ValueIterationResult& result);

/// P(o | b) = sum_s O_d(o | s) b(s).
double obs_likelihood(const Posg& model, const Belief& belief, int obs);

/// Bayes update through the joint action pair and defender observation.
/// Throws validation_error when the observation has zero likelihood.
Belief belief_update(const Posg& model, const Belief& belief, int ud, int ua, int obs);

struct LookaheadResult {
    double value = 0.0;
    int best_action = 0;   // maximizing defender action
    int best_node = 0;     // node with the best expected successor value
    int worst_response = 0;  // the adversary action attaining the min
};

/// One-step max-min backup over pure action pairs:
///   max_ud min_ua sum_o P(o|b) V(b_o^{ud,ua}).
LookaheadResult lookahead_value(const Posg& model, const NodeValueSet& values, const Belief& belief);

struct RobustLpOptions {
    // Adversary vertices are deterministic local response maps; the count
    // (|G_a||U_a|)^(|G_a||O_a|) must stay below this cap.
    double vertex_cap = 1e6;
};

struct NodeImprovement {
    double epsilon = 0.0;             // certified uniform improvement (may be <= 0)
    std::vector<double> mu_rows;      // num_obs x labels replacement rows for the node
    Belief tangent_belief;            // normalized duals of the state constraints
};

/// The robust improvement LP for one defender node: maximize epsilon subject
/// to the one-step backup dominating the node vector by epsilon at every
/// model state, for every deterministic adversary response, with the node's
/// observation rows constrained to be distributions. The adversary simplex
/// quantifier reduces to its vertices because the constraint is linear in
/// the adversary kernel.
NodeImprovement improve_node(const ProductPosg& product, const StructurePair& structures,
                             const NodeValueSet& values, int node,
                             const RobustLpOptions& options = {});

struct TangencyReport {
    std::vector<double> node_epsilon;
    std::vector<Belief> tangent_beliefs;  // one dual-witness belief per node
    bool local_equilibrium = false;       // every node epsilon <= 1e-8
};

TangencyReport tangency_report(const ProductPosg& product, const StructurePair& structures,
                               const NodeValueSet& values, const RobustLpOptions& options = {});

struct GrowthResult {
    Fsc fsc;
    int added = 0;
};

/// Controller growth: for each belief in `beliefs`, enumerate the one-step
/// look-ahead beliefs with positive observation likelihood and add a
/// deterministic node wired to the look-ahead maximizers whenever the
/// look-ahead value strictly exceeds the current belief value, up to
/// max_new_states additions. Identical wirings are added once per call.
GrowthResult add_states(const Posg& model, const Fsc& fsc_d, const NodeValueSet& values,
                        const std::vector<Belief>& beliefs, int max_new_states);

struct BpiOptions {
    int rounds = 1;           // growth rounds; 0 = plain value iteration
    int max_new_states = 2;   // per round
    int improve_sweeps = 10;  // cap on evaluate/improve alternations per round
    double tangent_tol = 1e-8;
    ValueIterationOptions vi;
    RobustLpOptions lp;
};

struct BpiResult {
    StructurePair structures;           // final (possibly grown) structures
    Fsc fsc_d;                          // concrete defender controller
    Fsc fsc_a;                          // realized adversary controller
    ValueIterationResult final_vi;
    std::vector<double> initial_values; // V at the initial chain state per round
    int nodes_added = 0;
};

/// Bounded policy iteration: alternates evaluation (value iteration) with
/// robust-LP node improvement until all nodes are tangent, then grows the
/// controller from the tangent beliefs (plus the corner and uniform
/// beliefs) and repeats for the requested number of rounds.
BpiResult bounded_policy_iteration(const ProductPosg& product, const StructurePair& structures,
                                   const BpiOptions& options = {});

}  // namespace posg
