#include "posg/simulation.hpp"

#include <algorithm>

#include "posg/errors.hpp"
#include "posg/rng.hpp"

namespace posg {

namespace {

int sample_row(CounterRng& rng, const double* row, int n) {
    double u = rng.next_double();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += row[i];
        if (u < acc) return i;
    }
    return n - 1;
}

}  // namespace

Trace simulate(const Posg& model, const Fsc& fsc_d, const Fsc& fsc_a, int steps,
               std::uint64_t seed) {
    if (steps < 0) throw validation_error("step count must be nonnegative");
    CounterRng rng(seed);
    Trace trace;
    trace.seed = seed;
    trace.step_cap = steps;
    trace.steps.reserve(steps);

    int s = model.initial;
    int gd = fsc_d.initial, ga = fsc_a.initial;
    const int labels_d = fsc_d.num_labels(), labels_a = fsc_a.num_labels();
    for (int t = 0; t < steps; ++t) {
        int od = sample_row(rng, &model.obs_kernel_d[static_cast<std::size_t>(s) * model.num_obs_d()],
                            model.num_obs_d());
        int oa = sample_row(rng, &model.obs_kernel_a[static_cast<std::size_t>(s) * model.num_obs_a()],
                            model.num_obs_a());
        int zd = sample_row(
            rng, &fsc_d.mu[(static_cast<std::size_t>(gd) * fsc_d.num_obs + od) * labels_d], labels_d);
        int za = sample_row(
            rng, &fsc_a.mu[(static_cast<std::size_t>(ga) * fsc_a.num_obs + oa) * labels_a], labels_a);
        int ud = zd % fsc_d.num_actions, gd_next = zd / fsc_d.num_actions;
        int ua = za % fsc_a.num_actions, ga_next = za / fsc_a.num_actions;
        int s_next = sample_row(
            rng,
            &model.trans[(((static_cast<std::size_t>(s) * model.num_actions_d()) + ud) *
                              model.num_actions_a() +
                          ua) *
                         model.num_states()],
            model.num_states());
        trace.steps.push_back({s, od, oa, gd, ga, ud, ua});
        s = s_next;
        gd = gd_next;
        ga = ga_next;
    }
    trace.final_state = s;
    trace.final_g_d = gd;
    trace.final_g_a = ga;
    return trace;
}

std::vector<double> success_rate(const Posg& model, const Fsc& fsc_d, const Fsc& fsc_a,
                                 const std::string& target_atom, const std::string& forbidden_atom,
                                 const std::vector<int>& caps, int trials, std::uint64_t seed) {
    if (trials < 1) throw validation_error("need at least one trial");
    Letter target = letter_from_atoms(model.ap, {target_atom});
    Letter forbidden = letter_from_atoms(model.ap, {forbidden_atom});
    int max_cap = 0;
    for (int cap : caps) max_cap = std::max(max_cap, cap);

    std::vector<long long> successes(caps.size(), 0);
    for (int trial = 0; trial < trials; ++trial) {
        Trace trace = simulate(model, fsc_d, fsc_a, max_cap, seed + static_cast<std::uint64_t>(trial));
        // First target arrival with no forbidden state before it (state
        // index t covers "within t steps").
        int success_time = -1;
        for (int t = 0; t <= max_cap; ++t) {
            int s = t < max_cap ? trace.steps[t].state : trace.final_state;
            if (model.label[s] & forbidden) break;
            if (model.label[s] & target) {
                success_time = t;
                break;
            }
        }
        if (success_time < 0) continue;
        for (std::size_t c = 0; c < caps.size(); ++c)
            if (success_time <= caps[c]) ++successes[c];
    }
    std::vector<double> rates(caps.size());
    for (std::size_t c = 0; c < caps.size(); ++c)
        rates[c] = static_cast<double>(successes[c]) / trials;
    return rates;
}

double satisfaction_frequency(const Gmc& gmc, const RecurrenceDecomposition& decomposition,
                              int initial_state, int step_cap, int trials, std::uint64_t seed) {
    const int n = gmc.num_states();
    // -1 transient, otherwise class index.
    std::vector<int> class_of(n, -1);
    std::vector<char> class_feasible(decomposition.classes.size(), 0);
    for (std::size_t c = 0; c < decomposition.classes.size(); ++c) {
        if (!decomposition.recurrent[c]) continue;
        for (int v : decomposition.classes[c]) class_of[v] = static_cast<int>(c);
        class_feasible[c] = decomposition.feasible_pair[c] ? 1 : 0;
    }

    long long successes = 0;
    for (int trial = 0; trial < trials; ++trial) {
        CounterRng rng(seed, static_cast<std::uint64_t>(trial));
        int state = initial_state;
        for (int t = 0; t < step_cap && class_of[state] < 0; ++t)
            state = sample_row(rng, &gmc.trans[static_cast<std::size_t>(state) * n], n);
        if (class_of[state] >= 0 && class_feasible[class_of[state]]) ++successes;
    }
    return static_cast<double>(successes) / trials;
}

}  // namespace posg
