#include "posg/value_iteration.hpp"

#include <algorithm>
#include <cmath>

#include "posg/errors.hpp"
#include "posg/linalg.hpp"
#include "posg/threading.hpp"

namespace posg {

namespace {

// Labels (g', u) reachable at (g, s): allowed by the mask under some
// observation the agent can actually receive in s.
std::vector<int> allowed_labels(const Posg& model, const std::vector<char>& mask, int num_nodes,
                                int num_obs, int num_actions, bool defender, int g, int s) {
    const int labels = num_nodes * num_actions;
    std::vector<int> out;
    for (int z = 0; z < labels; ++z) {
        bool live = false;
        for (int o = 0; o < num_obs && !live; ++o) {
            double w = defender ? model.od(s, o) : model.oa(s, o);
            if (w > 0.0 && mask[(static_cast<std::size_t>(g) * num_obs + o) * labels + z]) live = true;
        }
        if (live) out.push_back(z);
    }
    return out;
}

struct LabelTables {
    // per (g, s): allowed joint labels
    std::vector<std::vector<int>> defender;   // index g * |S| + s
    std::vector<std::vector<int>> adversary;
};

LabelTables build_label_tables(const Posg& model, const StructurePair& structures) {
    LabelTables tables;
    const int ns = model.num_states();
    tables.defender.resize(static_cast<std::size_t>(structures.num_gd) * ns);
    tables.adversary.resize(static_cast<std::size_t>(structures.num_ga) * ns);
    for (int g = 0; g < structures.num_gd; ++g)
        for (int s = 0; s < ns; ++s)
            tables.defender[static_cast<std::size_t>(g) * ns + s] =
                allowed_labels(model, structures.mask_d, structures.num_gd, model.num_obs_d(),
                               model.num_actions_d(), true, g, s);
    for (int g = 0; g < structures.num_ga; ++g)
        for (int s = 0; s < ns; ++s)
            tables.adversary[static_cast<std::size_t>(g) * ns + s] =
                allowed_labels(model, structures.mask_a, structures.num_ga, model.num_obs_a(),
                               model.num_actions_a(), false, g, s);
    return tables;
}

MatrixGame assemble_game(const ProductPosg& product, const std::vector<double>& value,
                         const Gmc& gmc, int state, const LabelTables& tables) {
    const Posg& model = *product.model;
    const int sq = gmc.product_state(state);
    const int gd = gmc.defender_node(state);
    const int ga = gmc.adversary_node(state);
    const int s = product.model_state(sq);
    const int nud = model.num_actions_d(), nua = model.num_actions_a();

    MatrixGame game;
    game.row_labels = tables.defender[static_cast<std::size_t>(gd) * model.num_states() + s];
    game.col_labels = tables.adversary[static_cast<std::size_t>(ga) * model.num_states() + s];
    game.rows = static_cast<int>(game.row_labels.size());
    game.cols = static_cast<int>(game.col_labels.size());
    if (game.rows == 0 || game.cols == 0)
        throw validation_error("structure mask leaves no allowed label at a state");
    game.payoff.assign(static_cast<std::size_t>(game.rows) * game.cols, 0.0);
    for (int r = 0; r < game.rows; ++r) {
        const int gd2 = game.row_labels[r] / nud;
        const int ud = game.row_labels[r] % nud;
        for (int c = 0; c < game.cols; ++c) {
            const int ga2 = game.col_labels[c] / nua;
            const int ua = game.col_labels[c] % nua;
            double backup = 0.0;
            for (const auto& [sq2, p] : product.row(sq, ud, ua))
                backup += p * value[gmc.index_of(sq2, gd2, ga2)];
            game.at(r, c) = backup;
        }
    }
    return game;
}

}  // namespace

MatrixGame state_game(const ProductPosg& product, const StructurePair& structures,
                      const std::vector<double>& value, const Gmc& gmc, int state) {
    LabelTables tables = build_label_tables(*product.model, structures);
    return assemble_game(product, value, gmc, state, tables);
}

ValueIterationResult value_iterate(const ProductPosg& product, const StructurePair& structures,
                                   const ValueIterationOptions& options, const Fsc* recset_fsc_d,
                                   const Fsc* recset_fsc_a) {
    if (options.epsilon <= 0.0) throw validation_error("epsilon must be positive");
    const Posg& model = *product.model;

    Fsc uniform_d = uniform_fsc(structures.num_gd, 0, model.num_obs_d(), model.num_actions_d(),
                                structures.mask_d, Agent::defender);
    Fsc uniform_a = uniform_fsc(structures.num_ga, 0, model.num_obs_a(), model.num_actions_a(),
                                structures.mask_a, Agent::adversary);
    Gmc gmc = build_gmc(product, uniform_d, uniform_a);
    const int n = gmc.num_states();
    if (recset_fsc_d &&
        (recset_fsc_d->num_states != structures.num_gd ||
         (recset_fsc_a && recset_fsc_a->num_states != structures.num_ga)))
        throw validation_error("recurrence-defining controllers do not match the structure sizes");

    ValueIterationResult result;
    result.value.assign(n, 0.0);
    result.defender_labels.resize(n);
    result.defender_strategy.resize(n);
    result.adversary_labels.resize(n);
    result.adversary_strategy.resize(n);

    LabelTables tables = build_label_tables(model, structures);
    auto default_strategies = [&](int state) {
        const int sq = gmc.product_state(state);
        const int s = product.model_state(sq);
        const auto& rows =
            tables.defender[static_cast<std::size_t>(gmc.defender_node(state)) * model.num_states() + s];
        const auto& cols =
            tables.adversary[static_cast<std::size_t>(gmc.adversary_node(state)) * model.num_states() + s];
        result.defender_labels[state] = rows;
        result.defender_strategy[state].assign(rows.size(), 1.0 / rows.size());
        result.adversary_labels[state] = cols;
        result.adversary_strategy[state].assign(cols.size(), 1.0 / cols.size());
    };
    for (int i = 0; i < n; ++i) default_strategies(i);

    if (recset_fsc_d || recset_fsc_a) {
        Gmc concrete = build_gmc(product, recset_fsc_d ? *recset_fsc_d : uniform_d,
                                 recset_fsc_a ? *recset_fsc_a : uniform_a);
        result.recset = phi_feasible_recsets(concrete).feasible_state_set(n);
    } else {
        result.recset = phi_feasible_recsets(gmc).feasible_state_set(n);
    }
    bool any = false;
    for (char c : result.recset) any |= c != 0;
    if (!any) {
        result.no_feasible_recurrent_set = true;
        result.converged = true;
        return result;
    }

    // States with no path into the feasible set keep value zero under every
    // policy the masks allow; skip them in the sweeps.
    Digraph digraph = induce_digraph(gmc);
    Digraph reversed;
    reversed.adjacency.resize(n);
    for (int v = 0; v < n; ++v)
        for (int w : digraph.adjacency[v]) reversed.adjacency[w].push_back(v);
    std::vector<char> can_reach(n, 0);
    {
        std::vector<int> queue;
        for (int i = 0; i < n; ++i)
            if (result.recset[i]) {
                can_reach[i] = 1;
                queue.push_back(i);
            }
        while (!queue.empty()) {
            int v = queue.back();
            queue.pop_back();
            for (int w : reversed.adjacency[v])
                if (!can_reach[w]) {
                    can_reach[w] = 1;
                    queue.push_back(w);
                }
        }
    }

    std::vector<int> active;
    for (int i = 0; i < n; ++i)
        if (!result.recset[i] && can_reach[i]) active.push_back(i);

    // Successor product states, for skipping re-solves whose inputs are
    // unchanged.
    const int num_sq = product.num_states();
    std::vector<std::vector<int>> succ_sq(num_sq);
    {
        const int nud = model.num_actions_d(), nua = model.num_actions_a();
        for (int sq = 0; sq < num_sq; ++sq) {
            std::vector<char> seen(num_sq, 0);
            for (int ud = 0; ud < nud; ++ud)
                for (int ua = 0; ua < nua; ++ua)
                    for (const auto& [sq2, p] : product.row(sq, ud, ua))
                        if (p > 0.0 && !seen[sq2]) {
                            seen[sq2] = 1;
                            succ_sq[sq].push_back(sq2);
                        }
        }
    }

    std::vector<double> current(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (result.recset[i]) current[i] = 1.0;
    result.v_min_nonzero = 1.0;

    std::vector<double> next = current;
    std::vector<char> sq_changed(num_sq, 1);  // everything fresh on the first sweep
    std::vector<double> computed(n, 0.0);
    double diff = 1.0;  // V^1 vs V^0

    while (diff > options.epsilon) {
        if (result.sweeps >= options.max_sweeps) {
            result.converged = false;
            result.value = current;
            return result;
        }
        parallel_for(0, static_cast<int>(active.size()), options.threads, [&](int idx) {
            const int state = active[idx];
            const int sq = gmc.product_state(state);
            bool stale = false;
            for (int sq2 : succ_sq[sq])
                if (sq_changed[sq2]) {
                    stale = true;
                    break;
                }
            if (!stale) {
                computed[state] = current[state];
                return;
            }
            MatrixGame game = assemble_game(product, current, gmc, state, tables);
            GameSolution sol = game_value(game);
            computed[state] = sol.value;
            result.defender_labels[state] = game.row_labels;
            result.defender_strategy[state] = sol.row_strategy;
            result.adversary_labels[state] = game.col_labels;
            result.adversary_strategy[state] = sol.col_strategy;
        });

        diff = 0.0;
        std::vector<char> next_changed(num_sq, 0);
        for (int state : active) {
            double candidate = computed[state];
            double previous = current[state];
            if (options.variant == SweepVariant::guarded &&
                candidate <= (1.0 + options.epsilon) * previous)
                candidate = previous;
            if (candidate < previous) {
                result.max_monotonicity_violation =
                    std::max(result.max_monotonicity_violation, previous - candidate);
                candidate = previous;  // the exact operator is monotone; remove float dust
            }
            next[state] = candidate;
            if (candidate > previous) {
                diff = std::max(diff, candidate - previous);
                next_changed[gmc.product_state(state)] = 1;
                if (candidate > 0.0) result.v_min_nonzero = std::min(result.v_min_nonzero, candidate);
            }
        }
        sq_changed = std::move(next_changed);
        current = next;
        ++result.sweeps;
    }

    // Residual of one more operator application on the returned vector.
    double residual = 0.0;
    for (int state : active) {
        MatrixGame game = assemble_game(product, current, gmc, state, tables);
        GameSolution sol = game_value(game);
        residual = std::max(residual, std::abs(sol.value - current[state]));
    }
    result.final_residual = residual;
    result.value = current;
    result.converged = true;
    return result;
}

long long termination_bound(int num_model_states, int num_dra_states, int num_gd, int num_ga,
                            double epsilon, double v_min) {
    if (epsilon <= 0.0) throw validation_error("epsilon must be positive");
    if (v_min <= 0.0 || v_min > 1.0) throw validation_error("v_min must lie in (0, 1]");
    double per_state = std::log(1.0 / v_min) / std::log1p(epsilon);
    double bound = static_cast<double>(num_model_states) * num_dra_states * num_gd * num_ga * per_state;
    return static_cast<long long>(std::ceil(bound - 1e-12));
}

RealizedPolicies realize_policies(const ProductPosg& product, const StructurePair& structures,
                                  const ValueIterationResult& result) {
    const Posg& model = *product.model;
    const int ns = model.num_states();

    Fsc uniform_d = uniform_fsc(structures.num_gd, 0, model.num_obs_d(), model.num_actions_d(),
                                structures.mask_d, Agent::defender);
    Fsc uniform_a = uniform_fsc(structures.num_ga, 0, model.num_obs_a(), model.num_actions_a(),
                                structures.mask_a, Agent::adversary);
    Gmc gmc = build_gmc(product, uniform_d, uniform_a);

    std::vector<int> canonical_sq(ns);
    for (int s = 0; s < ns; ++s) canonical_sq[s] = canonical_product_state(product, s);

    auto realize = [&](bool defender, double* total_residual) {
        const Fsc& uniform = defender ? uniform_d : uniform_a;
        const auto& mask = defender ? structures.mask_d : structures.mask_a;
        const int ng = uniform.num_states;
        const int num_obs = uniform.num_obs;
        const int num_actions = uniform.num_actions;
        const int labels = ng * num_actions;

        // mu_hat rows per (g, s) from the per-state equilibrium strategies at
        // the canonical chain states.
        std::vector<double> mu_hat(static_cast<std::size_t>(ng) * ns * labels, 0.0);
        for (int g = 0; g < ng; ++g)
            for (int s = 0; s < ns; ++s) {
                int sq = canonical_sq[s];
                int state = defender ? gmc.index_of(sq, g, uniform_a.initial)
                                     : gmc.index_of(sq, uniform_d.initial, g);
                const auto& label_list =
                    defender ? result.defender_labels[state] : result.adversary_labels[state];
                const auto& strategy =
                    defender ? result.defender_strategy[state] : result.adversary_strategy[state];
                double* row = &mu_hat[(static_cast<std::size_t>(g) * ns + s) * labels];
                for (std::size_t i = 0; i < label_list.size(); ++i) row[label_list[i]] += strategy[i];
            }

        Fsc fsc = uniform;
        double residual_sq = 0.0;
        // Per (g, z): solve sum_o O(o|s) mu(z|g,o) = mu_hat(z|g,s) across s
        // in least squares, over the observations allowed by the mask.
        for (int g = 0; g < ng; ++g) {
            std::vector<std::vector<double>> row_values(num_obs,
                                                        std::vector<double>(labels, 0.0));
            for (int z = 0; z < labels; ++z) {
                std::vector<int> free_obs;
                for (int o = 0; o < num_obs; ++o)
                    if (mask[(static_cast<std::size_t>(g) * num_obs + o) * labels + z])
                        free_obs.push_back(o);
                if (free_obs.empty()) continue;
                std::vector<double> a(static_cast<std::size_t>(ns) * free_obs.size());
                std::vector<double> b(ns);
                for (int s = 0; s < ns; ++s) {
                    for (std::size_t j = 0; j < free_obs.size(); ++j)
                        a[static_cast<std::size_t>(s) * free_obs.size() + j] =
                            defender ? model.od(s, free_obs[j]) : model.oa(s, free_obs[j]);
                    b[s] = mu_hat[(static_cast<std::size_t>(g) * ns + s) * labels + z];
                }
                double res = 0.0;
                std::vector<double> x =
                    least_squares(a, b, ns, static_cast<int>(free_obs.size()), &res);
                residual_sq += res * res;
                for (std::size_t j = 0; j < free_obs.size(); ++j)
                    row_values[free_obs[j]][z] = x[j];
            }
            for (int o = 0; o < num_obs; ++o) {
                std::vector<int> allowed;
                for (int z = 0; z < labels; ++z)
                    if (mask[(static_cast<std::size_t>(g) * num_obs + o) * labels + z])
                        allowed.push_back(z);
                std::vector<double> sub;
                sub.reserve(allowed.size());
                for (int z : allowed) sub.push_back(row_values[o][z]);
                sub = project_to_simplex(std::move(sub));
                const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
                for (int z = 0; z < labels; ++z) fsc.mu[base + z] = 0.0;
                for (std::size_t i = 0; i < allowed.size(); ++i) fsc.mu[base + allowed[i]] = sub[i];
            }
        }
        *total_residual = std::sqrt(residual_sq);
        return fsc;
    };

    RealizedPolicies out;
    out.fsc_d = realize(true, &out.residual_d);
    out.fsc_a = realize(false, &out.residual_a);
    return out;
}

}  // namespace posg
