#include "posg/structure_search.hpp"

#include <algorithm>
#include <set>

#include "posg/errors.hpp"
#include "posg/rng.hpp"

namespace posg {

namespace {

struct Dims {
    int num_gd, num_ga;
    int product_state(int i) const { return i / (num_gd * num_ga); }
    int defender_node(int i) const { return (i / num_ga) % num_gd; }
    int adversary_node(int i) const { return i % num_ga; }
};

bool mask_live(const std::vector<char>& mask, int num_states, int num_obs, int labels) {
    for (int g = 0; g < num_states; ++g)
        for (int o = 0; o < num_obs; ++o) {
            const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
            bool live = false;
            for (int z = 0; z < labels && !live; ++z) live = mask[base + z] != 0;
            if (!live) return false;
        }
    return true;
}

bool product_route_positive(const ProductPosg& product, int sq, int ud, int ua, int sq_to) {
    for (const auto& [next, p] : product.row(sq, ud, ua))
        if (next == sq_to) return p > 0.0;
    return false;
}

}  // namespace

BadGoodSets bad_good_sets(const Gmc& gmc, const Digraph& digraph,
                          const std::vector<int>& component, int pair_index) {
    std::vector<char> in_component(gmc.num_states(), 0);
    for (int v : component) in_component[v] = 1;

    std::set<int> bad;
    for (int v : component) {
        for (int w : digraph.adjacency[v])
            if (!in_component[w]) bad.insert(w);
        if (gmc.pairs[pair_index].l[v]) bad.insert(v);
    }
    BadGoodSets sets;
    sets.bad.assign(bad.begin(), bad.end());
    for (int v : component)
        if (gmc.pairs[pair_index].k[v]) sets.good.push_back(v);
    std::sort(sets.good.begin(), sets.good.end());
    return sets;
}

void forbid_defender(const ProductPosg& product, int num_gd, int num_ga, int state, int bad_state,
                     std::vector<char>& mask_d, const std::vector<char>& mask_a) {
    const Posg& model = *product.model;
    Dims dims{num_gd, num_ga};
    const int sq = dims.product_state(state);
    const int gd = dims.defender_node(state);
    const int ga = dims.adversary_node(state);
    const int sq_to = dims.product_state(bad_state);
    const int gd_to = dims.defender_node(bad_state);
    const int ga_to = dims.adversary_node(bad_state);
    const int s = product.model_state(sq);
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int nod = model.num_obs_d(), noa = model.num_obs_a();
    const int labels_d = num_gd * nud, labels_a = num_ga * nua;

    for (int ud = 0; ud < nud; ++ud) {
        // Adversary side of the composed transition: some observation and
        // action with positive kernel and mask mass reaching the bad state.
        bool adversary_route = false;
        for (int ua = 0; ua < nua && !adversary_route; ++ua) {
            if (!product_route_positive(product, sq, ud, ua, sq_to)) continue;
            for (int oa = 0; oa < noa && !adversary_route; ++oa)
                if (model.oa(s, oa) > 0.0 &&
                    mask_a[(static_cast<std::size_t>(ga) * noa + oa) * labels_a + ga_to * nua + ua])
                    adversary_route = true;
        }
        if (!adversary_route) continue;
        for (int od = 0; od < nod; ++od) {
            if (model.od(s, od) <= 0.0) continue;
            if (!mask_d[(static_cast<std::size_t>(gd) * nod + od) * labels_d + gd_to * nud + ud])
                continue;
            // Forbid the action at this observation for every node pair.
            for (int g = 0; g < num_gd; ++g)
                for (int g2 = 0; g2 < num_gd; ++g2)
                    mask_d[(static_cast<std::size_t>(g) * nod + od) * labels_d + g2 * nud + ud] = 0;
        }
    }
}

void prune_adversary(const ProductPosg& product, int num_gd, int num_ga, int state, int good_state,
                     const std::vector<char>& mask_d, std::vector<char>& mask_a) {
    const Posg& model = *product.model;
    Dims dims{num_gd, num_ga};
    const int sq = dims.product_state(state);
    const int gd = dims.defender_node(state);
    const int ga = dims.adversary_node(state);
    const int sq_to = dims.product_state(good_state);
    const int gd_to = dims.defender_node(good_state);
    const int ga_to = dims.adversary_node(good_state);
    const int s = product.model_state(sq);
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int nod = model.num_obs_d(), noa = model.num_obs_a();
    const int labels_d = num_gd * nud, labels_a = num_ga * nua;

    for (int ua = 0; ua < nua; ++ua) {
        // Defender part of the condition is observation-quantified per
        // defender action and does not depend on o_a.
        bool every_defender_action = true;
        for (int ud = 0; ud < nud && every_defender_action; ++ud) {
            bool route = product_route_positive(product, sq, ud, ua, sq_to);
            bool mask_ok = false;
            for (int od = 0; od < nod && !mask_ok; ++od)
                if (model.od(s, od) > 0.0 &&
                    mask_d[(static_cast<std::size_t>(gd) * nod + od) * labels_d + gd_to * nud + ud])
                    mask_ok = true;
            if (!route || !mask_ok) every_defender_action = false;
        }
        if (!every_defender_action) continue;
        for (int oa = 0; oa < noa; ++oa) {
            const std::size_t entry =
                (static_cast<std::size_t>(ga) * noa + oa) * labels_a + ga_to * nua + ua;
            if (model.oa(s, oa) > 0.0 && mask_a[entry]) mask_a[entry] = 0;
        }
    }
}

std::vector<StructurePair> candidate_structures(const ProductPosg& product, int num_gd, int num_ga,
                                                const CandidateOptions& options) {
    const Posg& model = *product.model;
    const int nod = model.num_obs_d(), noa = model.num_obs_a();
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int labels_d = num_gd * nud, labels_a = num_ga * nua;

    std::vector<char> init_d =
        options.init_mask_d.empty() ? full_mask(num_gd, nod, nud) : options.init_mask_d;
    std::vector<char> init_a =
        options.init_mask_a.empty() ? full_mask(num_ga, noa, nua) : options.init_mask_a;

    Fsc seed_d = uniform_fsc(num_gd, 0, nod, nud, init_d, Agent::defender);
    Fsc seed_a = uniform_fsc(num_ga, 0, noa, nua, init_a, Agent::adversary);
    Gmc gmc = build_gmc(product, seed_d, seed_a);
    Digraph digraph = induce_digraph(gmc);
    std::vector<std::vector<int>> components = sccs(digraph);

    std::vector<StructurePair> result;
    std::set<std::pair<std::vector<char>, std::vector<char>>> emitted;

    for (const auto& component : components) {
        for (std::size_t pair_index = 0; pair_index < gmc.pairs.size(); ++pair_index) {
            BadGoodSets sets = bad_good_sets(gmc, digraph, component, static_cast<int>(pair_index));
            if (sets.good.empty()) continue;  // the recurrence check can never pass
            const int good_anchor = sets.good.front();

            std::vector<char> mask_d = full_mask(num_gd, nod, nud);
            std::vector<char> mask_a = full_mask(num_ga, noa, nua);

            std::vector<int> bad = sets.bad;
            std::vector<char> in_bad(gmc.num_states(), 0);
            for (int v : bad) in_bad[v] = 1;
            bool aborted = false;
            for (std::size_t next_bad = 0; next_bad < bad.size(); ++next_bad) {
                if (!mask_live(mask_d, num_gd, nod, labels_d) ||
                    !mask_live(mask_a, num_ga, noa, labels_a)) {
                    aborted = true;
                    break;
                }
                const int bad_state = bad[next_bad];
                for (int state : component) {
                    if (in_bad[state]) continue;
                    forbid_defender(product, num_gd, num_ga, state, bad_state, mask_d, mask_a);
                    prune_adversary(product, num_gd, num_ga, state, good_anchor, mask_d, mask_a);
                }
                in_bad[bad_state] = 0;
            }
            if (aborted || !mask_live(mask_d, num_gd, nod, labels_d) ||
                !mask_live(mask_a, num_ga, noa, labels_a))
                continue;

            Fsc pruned_d = uniform_fsc(num_gd, 0, nod, nud, mask_d, Agent::defender);
            Fsc pruned_a = uniform_fsc(num_ga, 0, noa, nua, mask_a, Agent::adversary);
            Gmc pruned_gmc = build_gmc(product, pruned_d, pruned_a);
            RecurrenceDecomposition decomposition = phi_feasible_recsets(pruned_gmc);

            std::vector<char> recurrent_state(pruned_gmc.num_states(), 0);
            for (std::size_t c = 0; c < decomposition.classes.size(); ++c)
                if (decomposition.recurrent[c])
                    for (int v : decomposition.classes[c]) recurrent_state[v] = 1;
            int witness = -1;
            for (int v : sets.good)
                if (recurrent_state[v]) {
                    witness = v;
                    break;
                }
            if (witness < 0) continue;
            if (!decomposition.any_feasible()) continue;  // soundness re-verification

            StructurePair candidate{num_gd, num_ga, mask_d, mask_a, witness,
                                    static_cast<int>(pair_index)};
            if (emitted.insert({candidate.mask_d, candidate.mask_a}).second)
                result.push_back(std::move(candidate));
        }
    }
    return result;
}

std::vector<StructurePair> search_structures(const ProductPosg& product, int num_gd, int num_ga,
                                             const SearchOptions& options) {
    const Posg& model = *product.model;
    const int nod = model.num_obs_d(), noa = model.num_obs_a();
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int labels_d = num_gd * nud, labels_a = num_ga * nua;

    std::vector<StructurePair> result;
    std::set<std::pair<std::vector<char>, std::vector<char>>> emitted;

    auto random_mask = [](CounterRng& rng, int num_states, int num_obs, int labels) {
        std::vector<char> mask(static_cast<std::size_t>(num_states) * num_obs * labels, 0);
        for (int g = 0; g < num_states; ++g)
            for (int o = 0; o < num_obs; ++o) {
                const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
                int live = 0;
                for (int z = 0; z < labels; ++z)
                    if (rng.next_double() < 0.5) {
                        mask[base + z] = 1;
                        ++live;
                    }
                if (live == 0) mask[base + rng.next_int(labels)] = 1;
            }
        return mask;
    };

    for (int attempt = 0; attempt < options.attempts; ++attempt) {
        CandidateOptions candidate_options;
        if (attempt > 0) {
            CounterRng rng(options.seed, static_cast<std::uint64_t>(attempt));
            candidate_options.init_mask_d = random_mask(rng, num_gd, nod, labels_d);
            candidate_options.init_mask_a = random_mask(rng, num_ga, noa, labels_a);
        }
        for (auto& candidate : candidate_structures(product, num_gd, num_ga, candidate_options)) {
            if (emitted.insert({candidate.mask_d, candidate.mask_a}).second)
                result.push_back(std::move(candidate));
        }
        if (options.max_candidates > 0 &&
            static_cast<int>(result.size()) >= options.max_candidates)
            break;
    }
    return result;
}

}  // namespace posg
