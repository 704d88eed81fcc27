#include "posg/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "posg/errors.hpp"
#include "posg/ltl.hpp"
#include "posg/rng.hpp"

namespace posg {

GridConfig example_grid_3x2() {
    GridConfig config;
    config.width = 3;
    config.height = 2;
    config.obstacles = {4};
    config.targets = {5};
    return config;
}

GridConfig example_grid_5x4() {
    GridConfig config;
    config.width = 5;
    config.height = 4;
    config.obstacles = {7, 13};
    config.targets = {19};
    config.perfect_obs_on_labeled = true;
    return config;
}

Dra example_objective(const std::vector<std::string>& ap) {
    return ltl_to_dra(ltl::parse_ltl("G F tar & G !obs"), ap);
}

Posg strip_adversary(const Posg& model) {
    auto it = std::find(model.actions_a.begin(), model.actions_a.end(), "NA");
    const int keep = it == model.actions_a.end() ? 0 : static_cast<int>(it - model.actions_a.begin());

    Posg benign = model;
    benign.actions_a = {model.actions_a[keep]};
    const int ns = model.num_states(), nud = model.num_actions_d();
    benign.trans.assign(static_cast<std::size_t>(ns) * nud * 1 * ns, 0.0);
    for (int s = 0; s < ns; ++s)
        for (int ud = 0; ud < nud; ++ud)
            for (int s2 = 0; s2 < ns; ++s2)
                benign.t(s, ud, 0, s2) = model.t(s, ud, keep, s2);
    return benign;
}

FixedSizeSolver::FixedSizeSolver(const ProductPosg& product, const FixedSizeOptions& options)
    : product_(product), options_(options) {
    SearchOptions search;
    search.attempts = options.search_attempts;
    search.seed = options.seed;
    search.max_candidates = options.max_candidates;
    candidates_ = search_structures(product, options.num_gd, options.num_ga, search);
    solved_.assign(candidates_.size(), 0);
    results_.resize(candidates_.size());
}

const ValueIterationResult& FixedSizeSolver::candidate_result(int index) {
    if (!solved_[index]) {
        ValueIterationOptions vi;
        vi.epsilon = options_.epsilon;
        vi.variant = options_.variant;
        vi.threads = options_.threads;
        results_[index] = value_iterate(product_, candidates_[index], vi);
        solved_[index] = 1;
    }
    return results_[index];
}

double FixedSizeSolver::candidate_value(int index) {
    const ValueIterationResult& result = candidate_result(index);
    const StructurePair& pair = candidates_[index];
    return result.value[(product_.initial() * pair.num_gd) * pair.num_ga];
}

int FixedSizeSolver::best_candidate() {
    int best = -1;
    double best_value = -1.0;
    for (int i = 0; i < num_candidates(); ++i) {
        double v = candidate_value(i);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

int FixedSizeSolver::random_candidate(std::uint64_t trial) {
    if (candidates_.empty()) return -1;
    CounterRng rng(options_.seed ^ 0x72616E64ULL, trial);
    return rng.next_int(num_candidates());
}

std::vector<TableOneCell> reproduce_table1(const Posg& model, const std::vector<int>& gd_sizes,
                                           const std::vector<int>& ga_sizes, int trials,
                                           std::uint64_t seed, double epsilon, int threads) {
    Dra dra = example_objective(model.ap);
    ProductPosg product = build_product(model, dra);

    std::vector<TableOneCell> cells;
    for (int ga : ga_sizes)
        for (int gd : gd_sizes) {
            FixedSizeOptions options;
            options.num_gd = gd;
            options.num_ga = ga;
            options.epsilon = epsilon;
            options.threads = threads;
            options.seed = seed;
            FixedSizeSolver solver(product, options);

            TableOneCell cell;
            cell.num_gd = gd;
            cell.num_ga = ga;
            cell.num_candidates = solver.num_candidates();
            for (int trial = 0; trial < trials; ++trial) {
                int pick = solver.random_candidate(static_cast<std::uint64_t>(trial));
                cell.trial_values.push_back(pick < 0 ? 0.0 : solver.candidate_value(pick));
            }
            double mean = 0.0;
            for (double v : cell.trial_values) mean += v;
            mean /= trials;
            double var = 0.0;
            for (double v : cell.trial_values) var += (v - mean) * (v - mean);
            cell.mean = mean;
            cell.stddev = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
            cells.push_back(std::move(cell));
        }
    return cells;
}

std::vector<TableTwoRow> reproduce_table2(const Posg& model, const std::vector<int>& gd_sizes,
                                          std::uint64_t seed, double epsilon, int threads) {
    Posg benign_model = strip_adversary(model);
    Dra dra = example_objective(model.ap);
    ProductPosg product = build_product(model, dra);
    ProductPosg benign_product = build_product(benign_model, dra);

    std::vector<TableTwoRow> rows;
    for (int gd : gd_sizes) {
        TableTwoRow row;
        row.num_gd = gd;

        FixedSizeOptions options;
        options.num_gd = gd;
        options.num_ga = 1;
        options.epsilon = epsilon;
        options.threads = threads;
        options.seed = seed;

        // Benign synthesis: no adversary in the environment.
        FixedSizeSolver benign(benign_product, options);
        int benign_best = benign.best_candidate();
        Fsc benign_fsc_d;
        if (benign_best >= 0) {
            row.benign_baseline = benign.candidate_value(benign_best);
            benign_fsc_d = realize_policies(benign_product, benign.candidates()[benign_best],
                                            benign.candidate_result(benign_best))
                               .fsc_d;
        }

        // Adversary-aware synthesis on the full model.
        FixedSizeSolver aware(product, options);
        int aware_best = aware.best_candidate();
        Fsc aware_fsc_a;
        if (aware_best >= 0) {
            row.adversary_aware = aware.candidate_value(aware_best);
            aware_fsc_a = realize_policies(product, aware.candidates()[aware_best],
                                           aware.candidate_result(aware_best))
                              .fsc_a;
        }

        // The benign controller dropped into the adversarial environment,
        // evaluated exactly on the induced chain.
        if (benign_best >= 0 && aware_best >= 0) {
            Gmc gmc = build_gmc(product, benign_fsc_d, aware_fsc_a);
            RecurrenceDecomposition decomposition = phi_feasible_recsets(gmc);
            std::vector<double> reach =
                reach_probability(gmc, decomposition.feasible_state_set(gmc.num_states()));
            row.adversarial_baseline = reach[gmc.initial(benign_fsc_d, aware_fsc_a)];
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<FigFivePoint> reproduce_fig5(const Posg& model, const std::vector<int>& gd_sizes,
                                         const std::vector<int>& ga_sizes,
                                         const std::vector<int>& caps, int trials,
                                         std::uint64_t seed, double epsilon, int threads) {
    Dra dra = example_objective(model.ap);
    ProductPosg product = build_product(model, dra);

    std::vector<FigFivePoint> points;
    for (int ga : ga_sizes)
        for (int gd : gd_sizes) {
            FixedSizeOptions options;
            options.num_gd = gd;
            options.num_ga = ga;
            options.epsilon = epsilon;
            options.threads = threads;
            options.seed = seed;
            FixedSizeSolver solver(product, options);

            FigFivePoint point;
            point.num_gd = gd;
            point.num_ga = ga;
            int best = solver.best_candidate();
            if (best < 0) {
                point.rate_per_cap.assign(caps.size(), 0.0);
            } else {
                RealizedPolicies realized = realize_policies(product, solver.candidates()[best],
                                                             solver.candidate_result(best));
                point.rate_per_cap = success_rate(model, realized.fsc_d, realized.fsc_a, "tar",
                                                  "obs", caps, trials, seed);
            }
            points.push_back(std::move(point));
        }
    return points;
}

ExampleOneReport reproduce_example1(std::uint64_t seed, double epsilon, int threads) {
    Posg model = grid_world(example_grid_3x2());
    Dra dra = example_objective(model.ap);
    ProductPosg product = build_product(model, dra);

    FixedSizeOptions options;
    options.num_gd = 2;
    options.num_ga = 1;
    options.epsilon = epsilon;
    options.threads = threads;
    options.seed = seed;
    FixedSizeSolver solver(product, options);

    ExampleOneReport report;
    report.num_candidates = solver.num_candidates();
    int best = solver.best_candidate();
    if (best < 0) return report;
    report.best = solver.candidates()[best];
    report.best_value = solver.candidate_value(best);
    report.vi = solver.candidate_result(best);

    Fsc fsc_d = uniform_fsc(report.best.num_gd, 0, model.num_obs_d(), model.num_actions_d(),
                            report.best.mask_d, Agent::defender);
    Fsc fsc_a = uniform_fsc(report.best.num_ga, 0, model.num_obs_a(), model.num_actions_a(),
                            report.best.mask_a, Agent::adversary);
    Gmc gmc = build_gmc(product, fsc_d, fsc_a);
    RecurrenceDecomposition decomposition = phi_feasible_recsets(gmc);
    for (std::size_t c = 0; c < decomposition.classes.size(); ++c)
        if (decomposition.feasible_pair[c]) ++report.feasible_classes;
    std::vector<double> reach =
        reach_probability(gmc, decomposition.feasible_state_set(gmc.num_states()));
    report.reach_at_initial = reach[gmc.initial(fsc_d, fsc_a)];
    return report;
}

}  // namespace posg
