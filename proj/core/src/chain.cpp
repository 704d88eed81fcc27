#include "posg/chain.hpp"

#include <cmath>

#include "posg/errors.hpp"
#include "posg/linalg.hpp"

namespace posg {

Gmc build_gmc(const ProductPosg& product, const Fsc& fsc_d, const Fsc& fsc_a) {
    const Posg& model = *product.model;
    if (fsc_d.agent != Agent::defender || fsc_d.num_obs != model.num_obs_d() ||
        fsc_d.num_actions != model.num_actions_d())
        throw validation_error("defender FSC dimensions do not match the model");
    if (fsc_a.agent != Agent::adversary || fsc_a.num_obs != model.num_obs_a() ||
        fsc_a.num_actions != model.num_actions_a())
        throw validation_error("adversary FSC dimensions do not match the model");

    Gmc gmc;
    gmc.product = &product;
    gmc.num_gd = fsc_d.num_states;
    gmc.num_ga = fsc_a.num_states;
    const int nsq = product.num_states();
    const int n = gmc.num_states();
    const int nud = model.num_actions_d(), nua = model.num_actions_a();
    const int ngd = gmc.num_gd, nga = gmc.num_ga;

    std::vector<double> mu_hat_d = reparam(fsc_d, model);
    std::vector<double> mu_hat_a = reparam(fsc_a, model);

    gmc.trans.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int sq = 0; sq < nsq; ++sq) {
        int s = product.model_state(sq);
        for (int gd = 0; gd < ngd; ++gd) {
            const double* wd =
                &mu_hat_d[(static_cast<std::size_t>(s) * ngd + gd) * fsc_d.num_labels()];
            for (int ga = 0; ga < nga; ++ga) {
                const double* wa =
                    &mu_hat_a[(static_cast<std::size_t>(s) * nga + ga) * fsc_a.num_labels()];
                double* row = &gmc.trans[static_cast<std::size_t>(gmc.index_of(sq, gd, ga)) * n];
                for (int gd2 = 0; gd2 < ngd; ++gd2)
                    for (int ud = 0; ud < nud; ++ud) {
                        double pd = wd[gd2 * nud + ud];
                        if (pd == 0.0) continue;
                        for (int ga2 = 0; ga2 < nga; ++ga2)
                            for (int ua = 0; ua < nua; ++ua) {
                                double pa = wa[ga2 * nua + ua];
                                if (pa == 0.0) continue;
                                double w = pd * pa;
                                for (const auto& [sq2, pt] : product.row(sq, ud, ua))
                                    row[gmc.index_of(sq2, gd2, ga2)] += w * pt;
                            }
                    }
            }
        }
    }

    gmc.pairs.resize(product.pairs.size());
    for (std::size_t i = 0; i < product.pairs.size(); ++i) {
        gmc.pairs[i].l.assign(n, 0);
        gmc.pairs[i].k.assign(n, 0);
        for (int state = 0; state < n; ++state) {
            int sq = gmc.product_state(state);
            gmc.pairs[i].l[state] = product.pairs[i].l[sq];
            gmc.pairs[i].k[state] = product.pairs[i].k[sq];
        }
    }
    return gmc;
}

Digraph induce_digraph(const Gmc& gmc) {
    const int n = gmc.num_states();
    Digraph graph;
    graph.adjacency.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (gmc.p(i, j) > kEdgeThreshold) graph.adjacency[i].push_back(j);
    return graph;
}

std::vector<char> RecurrenceDecomposition::feasible_state_set(int num_states) const {
    std::vector<char> set(num_states, 0);
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (feasible_pair[c])
            for (int v : classes[c]) set[v] = 1;
    return set;
}

RecurrenceDecomposition phi_feasible_recsets(const Gmc& gmc) {
    Digraph graph = induce_digraph(gmc);
    RecurrenceDecomposition decomposition;
    decomposition.classes = sccs(graph);
    std::vector<char> sink = sink_components(graph, decomposition.classes);
    decomposition.recurrent.assign(decomposition.classes.size(), 0);
    decomposition.feasible_pair.assign(decomposition.classes.size(), std::nullopt);
    for (std::size_t c = 0; c < decomposition.classes.size(); ++c) {
        if (!sink[c]) continue;
        decomposition.recurrent[c] = 1;
        for (std::size_t i = 0; i < gmc.pairs.size(); ++i) {
            bool hits_l = false, hits_k = false;
            for (int v : decomposition.classes[c]) {
                if (gmc.pairs[i].l[v]) hits_l = true;
                if (gmc.pairs[i].k[v]) hits_k = true;
            }
            if (!hits_l && hits_k) {
                decomposition.feasible_pair[c] = static_cast<int>(i);
                break;
            }
        }
    }
    return decomposition;
}

std::vector<double> reach_probability(const Gmc& gmc, const std::vector<char>& targets) {
    const int n = gmc.num_states();
    if (targets.size() != static_cast<std::size_t>(n))
        throw validation_error("target set has the wrong size");

    RecurrenceDecomposition decomposition = phi_feasible_recsets(gmc);
    std::vector<char> recurrent_state(n, 0);
    for (std::size_t c = 0; c < decomposition.classes.size(); ++c) {
        if (!decomposition.recurrent[c]) continue;
        bool inside = targets[decomposition.classes[c].front()];
        for (int v : decomposition.classes[c]) {
            recurrent_state[v] = 1;
            if (static_cast<bool>(targets[v]) != inside)
                throw validation_error("targets are not a union of recurrent classes");
        }
    }
    for (int i = 0; i < n; ++i)
        if (targets[i] && !recurrent_state[i])
            throw validation_error("targets are not a union of recurrent classes");

    std::vector<int> transient;
    std::vector<int> transient_index(n, -1);
    for (int i = 0; i < n; ++i)
        if (!recurrent_state[i]) {
            transient_index[i] = static_cast<int>(transient.size());
            transient.push_back(i);
        }

    std::vector<double> x(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (targets[i]) x[i] = 1.0;
    const int m = static_cast<int>(transient.size());
    if (m == 0) return x;

    // (I - P_tt) x_t = P_t,target * 1
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> b(m, 0.0);
    for (int r = 0; r < m; ++r) {
        int i = transient[r];
        a[static_cast<std::size_t>(r) * m + r] = 1.0;
        for (int j = 0; j < n; ++j) {
            double p = gmc.p(i, j);
            if (p == 0.0) continue;
            if (transient_index[j] >= 0)
                a[static_cast<std::size_t>(r) * m + transient_index[j]] -= p;
            else if (targets[j])
                b[r] += p;
        }
    }
    std::vector<double> solution;
    try {
        solution = solve_dense(a, b, m);
    } catch (const numerical_error&) {
        throw numerical_error("absorption system is singular; the chain is not well formed");
    }

    // Defensive residual check: a valid chain always admits a clean solve.
    double residual = 0.0;
    for (int r = 0; r < m; ++r) {
        double v = -b[r];
        for (int c = 0; c < m; ++c) v += a[static_cast<std::size_t>(r) * m + c] * solution[c];
        residual = std::max(residual, std::abs(v));
    }
    if (residual > 1e-9) throw numerical_error("absorption solve residual too large");

    for (int r = 0; r < m; ++r) x[transient[r]] = solution[r];
    return x;
}

}  // namespace posg
