#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posg/chain.hpp"
#include "posg/posg.hpp"

namespace posg {

struct TraceStep {
    int state;
    int obs_d;
    int obs_a;
    int g_d;
    int g_a;
    int u_d;
    int u_a;
};

struct Trace {
    std::uint64_t seed = 0;
    int step_cap = 0;
    std::vector<TraceStep> steps;  // configuration before each transition
    int final_state = 0;
    int final_g_d = 0;
    int final_g_a = 0;
};

/// Samples the interaction loop for exactly `steps` transitions: both agents
/// observe independently, both controllers draw (next node, action), the
/// environment transitions. Identical inputs and seed reproduce the trace
/// byte for byte.
Trace simulate(const Posg& model, const Fsc& fsc_d, const Fsc& fsc_a, int steps,
               std::uint64_t seed);

/// Fraction of trials whose trajectory reaches a target-labeled state within
/// each step cap without ever visiting a forbidden-labeled state first. The
/// initial state counts as visited. Trial i uses seed + i; counts are exact
/// integers, so aggregation order does not matter.
std::vector<double> success_rate(const Posg& model, const Fsc& fsc_d, const Fsc& fsc_a,
                                 const std::string& target_atom, const std::string& forbidden_atom,
                                 const std::vector<int>& caps, int trials, std::uint64_t seed);

/// Monte Carlo estimate of the acceptance probability: fraction of chain
/// trajectories from `initial_state` absorbed into a feasible recurrent
/// class. Recurrent classes are closed, so a walk stops as soon as it enters
/// one; trajectories still transient at the cap count as failures.
double satisfaction_frequency(const Gmc& gmc, const RecurrenceDecomposition& decomposition,
                              int initial_state, int step_cap, int trials, std::uint64_t seed);

}  // namespace posg
