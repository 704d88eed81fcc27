#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posg/grid_world.hpp"
#include "posg/policy_improvement.hpp"
#include "posg/product.hpp"
#include "posg/simulation.hpp"
#include "posg/structure_search.hpp"
#include "posg/value_iteration.hpp"

namespace posg {

/// The 3x2 grid with the unsafe cell s4 and the goal cell s5.
GridConfig example_grid_3x2();

/// The 5x4 experiment grid: target s19, a fixed obstacle layout, and the
/// defender observing labeled cells correctly with probability one.
GridConfig example_grid_5x4();

/// The reach-repeatedly-while-avoiding objective over {obs, tar}:
/// "G F tar & G !obs".
Dra example_objective(const std::vector<std::string>& ap);

/// Restriction of a model to the single adversary action named "NA" (first
/// action when no such name exists): the benign environment.
Posg strip_adversary(const Posg& model);

struct FixedSizeOptions {
    int num_gd = 2;
    int num_ga = 1;
    double epsilon = 1e-4;
    SweepVariant variant = SweepVariant::plain;
    int threads = 1;
    int search_attempts = 64;
    int max_candidates = 64;
    std::uint64_t seed = 0;
};

/// Structure search plus value iteration for every candidate, memoized.
/// Exposes both the best candidate (synthesis) and seeded random picks
/// (experiment trials).
class FixedSizeSolver {
public:
    FixedSizeSolver(const ProductPosg& product, const FixedSizeOptions& options);

    int num_candidates() const { return static_cast<int>(candidates_.size()); }
    const std::vector<StructurePair>& candidates() const { return candidates_; }

    /// V at the initial chain state for candidate i (memoized).
    double candidate_value(int index);
    const ValueIterationResult& candidate_result(int index);

    /// Candidate index with the highest initial value (-1 when none).
    int best_candidate();

    /// Seeded uniform pick among candidates (-1 when none).
    int random_candidate(std::uint64_t trial);

private:
    const ProductPosg& product_;
    FixedSizeOptions options_;
    std::vector<StructurePair> candidates_;
    std::vector<char> solved_;
    std::vector<ValueIterationResult> results_;
};

struct TableOneCell {
    int num_gd = 0;
    int num_ga = 0;
    double mean = 0.0;
    double stddev = 0.0;
    int num_candidates = 0;
    std::vector<double> trial_values;
};

/// Mean/stddev of V(initial) over seeded trials; each trial evaluates a
/// random admissible structure pair of the requested sizes.
std::vector<TableOneCell> reproduce_table1(const Posg& model, const std::vector<int>& gd_sizes,
                                           const std::vector<int>& ga_sizes, int trials,
                                           std::uint64_t seed, double epsilon, int threads);

struct TableTwoRow {
    int num_gd = 0;
    double benign_baseline = 0.0;      // synthesized and evaluated without the adversary
    double adversarial_baseline = 0.0; // benign controller against the synthesized adversary
    double adversary_aware = 0.0;      // full max-min synthesis
};

std::vector<TableTwoRow> reproduce_table2(const Posg& model, const std::vector<int>& gd_sizes,
                                          std::uint64_t seed, double epsilon, int threads);

struct FigFivePoint {
    int num_gd = 0;
    int num_ga = 0;
    std::vector<double> rate_per_cap;  // aligned with the caps argument
};

/// Simulated first-arrival success fractions for the realized controller
/// pair of each configuration.
std::vector<FigFivePoint> reproduce_fig5(const Posg& model, const std::vector<int>& gd_sizes,
                                         const std::vector<int>& ga_sizes,
                                         const std::vector<int>& caps, int trials,
                                         std::uint64_t seed, double epsilon, int threads);

struct ExampleOneReport {
    int num_candidates = 0;
    double best_value = 0.0;
    double reach_at_initial = 0.0;   // exact absorption probability, best pair
    int feasible_classes = 0;
    ValueIterationResult vi;
    StructurePair best;
};

/// The 3x2 walkthrough: search at sizes (2, 1), evaluate, and verify the
/// best pair by exact chain analysis.
ExampleOneReport reproduce_example1(std::uint64_t seed, double epsilon, int threads);

}  // namespace posg
