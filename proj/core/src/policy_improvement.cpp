#include "posg/policy_improvement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "posg/errors.hpp"
#include "posg/simplex.hpp"

namespace posg {

namespace {
constexpr double kLikelihoodTol = 1e-12;
constexpr double kGrowthTol = 1e-9;
}  // namespace

NodeValueSet extract_node_values(const ProductPosg& product, const StructurePair& structures,
                                 const ValueIterationResult& result) {
    const Posg& model = *product.model;
    NodeValueSet set;
    set.num_nodes = structures.num_gd;
    set.num_states = model.num_states();
    set.values.resize(static_cast<std::size_t>(set.num_nodes) * set.num_states);
    for (int g = 0; g < set.num_nodes; ++g)
        for (int s = 0; s < set.num_states; ++s) {
            int sq = canonical_product_state(product, s);
            int state = (sq * structures.num_gd + g) * structures.num_ga + 0;
            set.values[static_cast<std::size_t>(g) * set.num_states + s] = result.value[state];
        }
    return set;
}

double obs_likelihood(const Posg& model, const Belief& belief, int obs) {
    double p = 0.0;
    for (int s = 0; s < model.num_states(); ++s) p += model.od(s, obs) * belief[s];
    return p;
}

Belief belief_update(const Posg& model, const Belief& belief, int ud, int ua, int obs) {
    const int ns = model.num_states();
    double likelihood = obs_likelihood(model, belief, obs);
    if (likelihood <= kLikelihoodTol)
        throw validation_error("belief update conditioned on a zero-likelihood observation");
    Belief next(ns, 0.0);
    for (int s = 0; s < ns; ++s) {
        double w = model.od(s, obs) * belief[s];
        if (w == 0.0) continue;
        for (int s2 = 0; s2 < ns; ++s2) next[s2] += model.t(s, ud, ua, s2) * w;
    }
    double total = 0.0;
    for (double v : next) total += v;
    for (double& v : next) v /= total;
    return next;
}

LookaheadResult lookahead_value(const Posg& model, const NodeValueSet& values,
                                const Belief& belief) {
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int nod = model.num_obs_d();

    LookaheadResult out;
    double best = -1.0;
    int best_ud = 0, best_ua = 0;
    for (int ud = 0; ud < nud; ++ud) {
        double worst = 2.0;
        int worst_ua = 0;
        for (int ua = 0; ua < nua; ++ua) {
            double v = 0.0;
            for (int o = 0; o < nod; ++o) {
                double p = obs_likelihood(model, belief, o);
                if (p <= kLikelihoodTol) continue;
                v += p * values.value(belief_update(model, belief, ud, ua, o));
            }
            if (v < worst) {
                worst = v;
                worst_ua = ua;
            }
        }
        if (worst > best) {
            best = worst;
            best_ud = ud;
            best_ua = worst_ua;
        }
    }
    out.value = best;
    out.best_action = best_ud;
    out.worst_response = best_ua;

    // The node a new deterministic successor should point at: maximal
    // expected alpha value over the look-ahead beliefs of the chosen pair.
    double best_node_value = -1.0;
    for (int g = 0; g < values.num_nodes; ++g) {
        double v = 0.0;
        for (int o = 0; o < nod; ++o) {
            double p = obs_likelihood(model, belief, o);
            if (p <= kLikelihoodTol) continue;
            v += p * values.node_value(g, belief_update(model, belief, best_ud, best_ua, o));
        }
        if (v > best_node_value) {
            best_node_value = v;
            out.best_node = g;
        }
    }
    return out;
}

namespace {

// Deterministic adversary local responses restricted to the action
// component: the constraint right side depends on the adversary kernel only
// through its per-observation action marginals, so these are the vertices
// that matter.
std::vector<std::vector<int>> adversary_vertices(const Posg& model, const StructurePair& structures,
                                                 const RobustLpOptions& options) {
    const int noa = model.num_obs_a(), nua = model.num_actions_a();
    double full_count = std::pow(static_cast<double>(structures.num_ga) * nua,
                                 static_cast<double>(structures.num_ga) * noa);
    if (full_count > options.vertex_cap)
        throw numerical_error("adversary vertex count exceeds the configured cap");
    std::vector<std::vector<int>> vertices;
    std::vector<int> assignment(noa, 0);
    for (;;) {
        vertices.push_back(assignment);
        int pos = 0;
        while (pos < noa) {
            if (++assignment[pos] < nua) break;
            assignment[pos] = 0;
            ++pos;
        }
        if (pos == noa) break;
    }
    return vertices;
}

}  // namespace

NodeImprovement improve_node(const ProductPosg& product, const StructurePair& structures,
                             const NodeValueSet& values, int node, const RobustLpOptions& options) {
    const Posg& model = *product.model;
    const int ns = model.num_states();
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int nod = model.num_obs_d(), noa = model.num_obs_a();
    const int labels = structures.num_gd * nud;

    std::vector<std::vector<int>> vertices = adversary_vertices(model, structures, options);

    // backup[s][ud][g'] under a fixed adversary action, reused across
    // vertices via the per-observation expectation.
    // inner[ua][s][ud][g'] = sum_{s'} T(s'|s,ud,ua) V_{g'}(s').
    std::vector<double> inner(static_cast<std::size_t>(nua) * ns * nud * structures.num_gd, 0.0);
    for (int ua = 0; ua < nua; ++ua)
        for (int s = 0; s < ns; ++s)
            for (int ud = 0; ud < nud; ++ud)
                for (int g2 = 0; g2 < structures.num_gd; ++g2) {
                    double v = 0.0;
                    for (int s2 = 0; s2 < ns; ++s2)
                        v += model.t(s, ud, ua, s2) * values.at(g2, s2);
                    inner[((static_cast<std::size_t>(ua) * ns + s) * nud + ud) * structures.num_gd +
                          g2] = v;
                }

    // Variables: epsilon, then mu(o, z) for the improved node.
    const int num_vars = 1 + nod * labels;
    LinearProgram lp(num_vars);
    lp.objective[0] = 1.0;
    lp.lower[0] = -2.0;  // epsilon may come out nonpositive for dominated rows

    for (const auto& vertex : vertices) {
        for (int s = 0; s < ns; ++s) {
            std::vector<double> row(num_vars, 0.0);
            row[0] = 1.0;
            for (int o = 0; o < nod; ++o) {
                double od = model.od(s, o);
                if (od == 0.0) continue;
                for (int z = 0; z < labels; ++z) {
                    const int g2 = z / nud, ud = z % nud;
                    double w = 0.0;
                    for (int oa = 0; oa < noa; ++oa) {
                        double pa = model.oa(s, oa);
                        if (pa == 0.0) continue;
                        w += pa * inner[((static_cast<std::size_t>(vertex[oa]) * ns + s) * nud + ud) *
                                            structures.num_gd +
                                        g2];
                    }
                    row[1 + o * labels + z] -= od * w;
                }
            }
            lp.add_ineq(std::move(row), -values.at(node, s));
        }
    }
    for (int o = 0; o < nod; ++o) {
        std::vector<double> row(num_vars, 0.0);
        for (int z = 0; z < labels; ++z) row[1 + o * labels + z] = 1.0;
        lp.add_eq(std::move(row), 1.0);
    }

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::optimal) throw numerical_error("robust improvement LP did not solve");

    NodeImprovement out;
    out.epsilon = sol.value;
    out.mu_rows.assign(static_cast<std::size_t>(nod) * labels, 0.0);
    for (int o = 0; o < nod; ++o) {
        double total = 0.0;
        for (int z = 0; z < labels; ++z) {
            double v = std::max(sol.x[1 + o * labels + z], 0.0);
            out.mu_rows[static_cast<std::size_t>(o) * labels + z] = v;
            total += v;
        }
        for (int z = 0; z < labels; ++z)
            out.mu_rows[static_cast<std::size_t>(o) * labels + z] /= total;
    }

    out.tangent_belief.assign(ns, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < sol.ineq_duals.size(); ++r) {
        out.tangent_belief[r % ns] += sol.ineq_duals[r];
        total += sol.ineq_duals[r];
    }
    if (total > kLikelihoodTol)
        for (double& v : out.tangent_belief) v /= total;
    else
        out.tangent_belief.assign(ns, 1.0 / ns);
    return out;
}

TangencyReport tangency_report(const ProductPosg& product, const StructurePair& structures,
                               const NodeValueSet& values, const RobustLpOptions& options) {
    TangencyReport report;
    report.local_equilibrium = true;
    for (int g = 0; g < structures.num_gd; ++g) {
        NodeImprovement improvement = improve_node(product, structures, values, g, options);
        report.node_epsilon.push_back(improvement.epsilon);
        report.tangent_beliefs.push_back(improvement.tangent_belief);
        if (improvement.epsilon > 1e-8) report.local_equilibrium = false;
    }
    return report;
}

namespace {

// Grows the controller by one deterministic node wired to (target, action)
// for every observation. Existing rows may transition into the new node
// (mask opened, probability zero); the new node's own rows are fully open.
Fsc add_node(const Fsc& fsc, int target, int action) {
    Fsc out;
    out.agent = fsc.agent;
    out.num_states = fsc.num_states + 1;
    out.initial = fsc.initial;
    out.num_obs = fsc.num_obs;
    out.num_actions = fsc.num_actions;
    const int old_labels = fsc.num_labels();
    const int new_labels = out.num_labels();
    out.mu.assign(static_cast<std::size_t>(out.num_states) * out.num_obs * new_labels, 0.0);
    out.mask.assign(out.mu.size(), 0);
    for (int g = 0; g < fsc.num_states; ++g)
        for (int o = 0; o < fsc.num_obs; ++o) {
            const std::size_t src = (static_cast<std::size_t>(g) * fsc.num_obs + o) * old_labels;
            const std::size_t dst = (static_cast<std::size_t>(g) * out.num_obs + o) * new_labels;
            for (int z = 0; z < old_labels; ++z) {
                out.mu[dst + z] = fsc.mu[src + z];
                out.mask[dst + z] = fsc.mask[src + z];
            }
            for (int u = 0; u < out.num_actions; ++u)
                out.mask[dst + fsc.num_states * out.num_actions + u] = 1;
        }
    for (int o = 0; o < out.num_obs; ++o) {
        const std::size_t dst =
            (static_cast<std::size_t>(fsc.num_states) * out.num_obs + o) * new_labels;
        for (int z = 0; z < new_labels; ++z) out.mask[dst + z] = 1;
        out.mu[dst + target * out.num_actions + action] = 1.0;
    }
    return out;
}

}  // namespace

GrowthResult add_states(const Posg& model, const Fsc& fsc_d, const NodeValueSet& values,
                        const std::vector<Belief>& beliefs, int max_new_states) {
    GrowthResult out;
    out.fsc = fsc_d;
    std::set<std::pair<int, int>> wired;
    for (const Belief& belief : beliefs) {
        double current = values.value(belief);
        for (int ud = 0; ud < model.num_actions_d(); ++ud)
            for (int ua = 0; ua < model.num_actions_a(); ++ua)
                for (int o = 0; o < model.num_obs_d(); ++o) {
                    if (obs_likelihood(model, belief, o) <= kLikelihoodTol) continue;
                    Belief ahead = belief_update(model, belief, ud, ua, o);
                    LookaheadResult lookahead = lookahead_value(model, values, ahead);
                    if (lookahead.value <= current + kGrowthTol) continue;
                    if (out.added >= max_new_states) continue;
                    if (!wired.insert({lookahead.best_node, lookahead.best_action}).second) continue;
                    out.fsc = add_node(out.fsc, lookahead.best_node, lookahead.best_action);
                    ++out.added;
                }
    }
    return out;
}

BpiResult bounded_policy_iteration(const ProductPosg& product, const StructurePair& structures,
                                   const BpiOptions& options) {
    const Posg& model = *product.model;
    BpiResult out;
    out.structures = structures;
    out.fsc_d = uniform_fsc(structures.num_gd, 0, model.num_obs_d(), model.num_actions_d(),
                            structures.mask_d, Agent::defender);

    for (int round = 0;; ++round) {
        bool grown = round > 0;
        ValueIterationResult vi =
            value_iterate(product, out.structures, options.vi, grown ? &out.fsc_d : nullptr, nullptr);
        int initial_state =
            (product.initial() * out.structures.num_gd + out.fsc_d.initial) * out.structures.num_ga;
        out.initial_values.push_back(vi.value[initial_state]);
        if (round == options.rounds || vi.no_feasible_recurrent_set) {
            out.final_vi = std::move(vi);
            break;
        }

        // Improvement sweeps at fixed size until every node is tangent.
        NodeValueSet values = extract_node_values(product, out.structures, vi);
        TangencyReport report;
        for (int sweep = 0; sweep < options.improve_sweeps; ++sweep) {
            report = tangency_report(product, out.structures, values, options.lp);
            bool installed = false;
            for (int g = 0; g < out.structures.num_gd; ++g) {
                if (report.node_epsilon[g] <= options.tangent_tol) continue;
                NodeImprovement improvement =
                    improve_node(product, out.structures, values, g, options.lp);
                const int labels = out.fsc_d.num_labels();
                for (int o = 0; o < out.fsc_d.num_obs; ++o) {
                    const std::size_t base =
                        (static_cast<std::size_t>(g) * out.fsc_d.num_obs + o) * labels;
                    for (int z = 0; z < labels; ++z) {
                        double p = improvement.mu_rows[static_cast<std::size_t>(o) * labels + z];
                        out.fsc_d.mu[base + z] = p;
                        if (p > 0.0) {
                            out.fsc_d.mask[base + z] = 1;
                            out.structures.mask_d[base + z] = 1;
                        }
                    }
                }
                installed = true;
            }
            if (!installed) break;
            vi = value_iterate(product, out.structures, options.vi, &out.fsc_d, nullptr);
            values = extract_node_values(product, out.structures, vi);
        }

        std::vector<Belief> beliefs = report.tangent_beliefs;
        for (int s = 0; s < model.num_states(); ++s) {
            Belief corner(model.num_states(), 0.0);
            corner[s] = 1.0;
            beliefs.push_back(std::move(corner));
        }
        beliefs.emplace_back(model.num_states(), 1.0 / model.num_states());

        GrowthResult growth = add_states(model, out.fsc_d, values, beliefs, options.max_new_states);
        if (growth.added == 0) {
            out.final_vi = std::move(vi);  // nothing to grow; the last evaluation stands
            break;
        }
        out.fsc_d = growth.fsc;
        out.nodes_added += growth.added;
        out.structures.num_gd = out.fsc_d.num_states;
        out.structures.mask_d = out.fsc_d.mask;
    }

    RealizedPolicies realized = realize_policies(product, out.structures, out.final_vi);
    out.fsc_a = realized.fsc_a;
    return out;
}

}  // namespace posg
