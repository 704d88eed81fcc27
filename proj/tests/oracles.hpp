// Independent reference implementations used as test oracles. Everything
// here recomputes results through a different algorithmic route than the
// library (direct semantics, exhaustive enumeration, brute-force loops,
// Monte Carlo) so that agreement is meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "posg/chain.hpp"
#include "posg/digraph.hpp"
#include "posg/dra.hpp"
#include "posg/errors.hpp"
#include "posg/linalg.hpp"
#include "posg/ltl.hpp"
#include "posg/matrix_game.hpp"
#include "posg/posg.hpp"
#include "posg/product.hpp"
#include "posg/rng.hpp"
#include "posg/simplex.hpp"
#include "posg/structure_search.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// LTL semantics on ultimately periodic words, evaluated clause by clause.
// Positions 0 .. P+C-1 with succ(P+C-1) = P.
// ---------------------------------------------------------------------------

inline std::vector<char> eval_formula(const posg::ltl::FormulaPtr& f,
                                      const std::vector<posg::Letter>& prefix,
                                      const std::vector<posg::Letter>& cycle,
                                      const std::vector<std::string>& ap) {
    using posg::ltl::Op;
    const int p = static_cast<int>(prefix.size());
    const int n = p + static_cast<int>(cycle.size());
    auto letter_at = [&](int i) { return i < p ? prefix[i] : cycle[i - p]; };
    auto succ = [&](int i) { return i + 1 < n ? i + 1 : p; };

    std::vector<char> out(n, 0);
    switch (f->op) {
        case Op::True:
            std::fill(out.begin(), out.end(), 1);
            break;
        case Op::False:
            break;
        case Op::Atom: {
            auto it = std::find(ap.begin(), ap.end(), f->atom);
            int bit = static_cast<int>(it - ap.begin());
            for (int i = 0; i < n; ++i) out[i] = (letter_at(i) >> bit) & 1;
            break;
        }
        case Op::Not: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            for (int i = 0; i < n; ++i) out[i] = !a[i];
            break;
        }
        case Op::And: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            auto b = eval_formula(f->rhs, prefix, cycle, ap);
            for (int i = 0; i < n; ++i) out[i] = a[i] && b[i];
            break;
        }
        case Op::Or: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            auto b = eval_formula(f->rhs, prefix, cycle, ap);
            for (int i = 0; i < n; ++i) out[i] = a[i] || b[i];
            break;
        }
        case Op::Implies: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            auto b = eval_formula(f->rhs, prefix, cycle, ap);
            for (int i = 0; i < n; ++i) out[i] = !a[i] || b[i];
            break;
        }
        case Op::Next: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            for (int i = 0; i < n; ++i) out[i] = a[succ(i)];
            break;
        }
        case Op::Until: {
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            auto b = eval_formula(f->rhs, prefix, cycle, ap);
            // least fixed point of  U = b | (a & X U)
            for (int round = 0; round <= n; ++round) {
                bool changed = false;
                for (int i = n - 1; i >= 0; --i) {
                    char v = b[i] || (a[i] && out[succ(i)]);
                    if (v != out[i]) {
                        out[i] = v;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
            break;
        }
        case Op::Eventually: {
            auto t = posg::ltl::make_until(posg::ltl::make_true(), f->lhs);
            return eval_formula(t, prefix, cycle, ap);
        }
        case Op::Always: {
            // greatest fixed point of  G = a & X G
            auto a = eval_formula(f->lhs, prefix, cycle, ap);
            std::fill(out.begin(), out.end(), 1);
            for (int round = 0; round <= n; ++round) {
                bool changed = false;
                for (int i = n - 1; i >= 0; --i) {
                    char v = a[i] && out[succ(i)];
                    if (v != out[i]) {
                        out[i] = v;
                        changed = true;
                    }
                }
                if (!changed) break;
            }
            break;
        }
    }
    return out;
}

inline bool lasso_models(const posg::ltl::FormulaPtr& f, const std::vector<posg::Letter>& prefix,
                         const std::vector<posg::Letter>& cycle,
                         const std::vector<std::string>& ap) {
    return eval_formula(f, prefix, cycle, ap)[0] != 0;
}

// All lasso words with |prefix| + |cycle| <= max_len over num_letters letters.
inline void for_each_lasso(int num_letters, int max_len,
                           const std::function<void(const std::vector<posg::Letter>&,
                                                    const std::vector<posg::Letter>&)>& fn) {
    for (int pl = 0; pl <= max_len - 1; ++pl)
        for (int cl = 1; pl + cl <= max_len; ++cl) {
            const int total = pl + cl;
            std::vector<int> digits(total, 0);
            for (;;) {
                std::vector<posg::Letter> prefix(digits.begin(), digits.begin() + pl);
                std::vector<posg::Letter> cycle(digits.begin() + pl, digits.end());
                fn(prefix, cycle);
                int pos = 0;
                while (pos < total) {
                    if (++digits[pos] < num_letters) break;
                    digits[pos] = 0;
                    ++pos;
                }
                if (pos == total) break;
            }
        }
}

// ---------------------------------------------------------------------------
// SCCs via transitive closure (Floyd-Warshall style mutual reachability).
// ---------------------------------------------------------------------------

inline std::vector<std::vector<int>> scc_closure(const posg::Digraph& graph) {
    const int n = graph.num_nodes();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int v = 0; v < n; ++v)
        for (int w : graph.adjacency[v]) reach[v][w] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    std::vector<int> component(n, -1);
    std::vector<std::vector<int>> components;
    for (int v = 0; v < n; ++v) {
        if (component[v] != -1) continue;
        std::vector<int> group;
        for (int w = v; w < n; ++w)
            if (component[w] == -1 && (w == v || (reach[v][w] && reach[w][v]))) {
                component[w] = static_cast<int>(components.size());
                group.push_back(w);
            }
        components.push_back(std::move(group));
    }
    return components;
}

// ---------------------------------------------------------------------------
// LP oracle: enumerate basic solutions from all n-subsets of the rows
// (inequalities, equalities, bounds) taken as equalities.
// ---------------------------------------------------------------------------

inline double lp_vertex_enumeration(const posg::LinearProgram& lp) {
    const int n = lp.num_vars;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (std::size_t r = 0; r < lp.ineq_a.size(); ++r) {
        rows.push_back(lp.ineq_a[r]);
        rhs.push_back(lp.ineq_b[r]);
    }
    for (std::size_t r = 0; r < lp.eq_a.size(); ++r) {
        rows.push_back(lp.eq_a[r]);
        rhs.push_back(lp.eq_b[r]);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> row(n, 0.0);
        row[j] = 1.0;
        rows.push_back(row);
        rhs.push_back(lp.lower[j]);
        if (lp.upper[j]) {
            rows.push_back(row);
            rhs.push_back(*lp.upper[j]);
        }
    }
    const int m = static_cast<int>(rows.size());
    double best = -std::numeric_limits<double>::infinity();

    std::vector<int> pick(n, 0);
    std::function<void(int, int)> recurse = [&](int start, int depth) {
        if (depth == n) {
            std::vector<double> a(static_cast<std::size_t>(n) * n);
            std::vector<double> b(n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = rows[pick[i]][j];
                b[i] = rhs[pick[i]];
            }
            std::vector<double> x;
            try {
                x = posg::solve_dense(a, b, n);
            } catch (const posg::numerical_error&) {
                return;
            }
            for (std::size_t r = 0; r < lp.ineq_a.size(); ++r) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += lp.ineq_a[r][j] * x[j];
                if (lhs > lp.ineq_b[r] + 1e-7) return;
            }
            for (std::size_t r = 0; r < lp.eq_a.size(); ++r) {
                double lhs = 0.0;
                for (int j = 0; j < n; ++j) lhs += lp.eq_a[r][j] * x[j];
                if (std::abs(lhs - lp.eq_b[r]) > 1e-7) return;
            }
            for (int j = 0; j < n; ++j) {
                if (x[j] < lp.lower[j] - 1e-7) return;
                if (lp.upper[j] && x[j] > *lp.upper[j] + 1e-7) return;
            }
            double value = 0.0;
            for (int j = 0; j < n; ++j) value += lp.objective[j] * x[j];
            best = std::max(best, value);
            return;
        }
        for (int r = start; r < m; ++r) {
            pick[depth] = r;
            recurse(r + 1, depth + 1);
        }
    };
    recurse(0, 0);
    return best;
}

// ---------------------------------------------------------------------------
// Fictitious play: certified value bracket for a matrix game.
// ---------------------------------------------------------------------------

struct GameBracket {
    double lower;
    double upper;
};

inline GameBracket fictitious_play(const posg::MatrixGame& game, int rounds) {
    const int m = game.rows, n = game.cols;
    std::vector<double> row_payoff(m, 0.0);  // cumulative payoff vs column history
    std::vector<double> col_payoff(n, 0.0);  // cumulative payoff vs row history
    int row_choice = 0, col_choice = 0;
    GameBracket bracket{-std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
    for (int t = 1; t <= rounds; ++t) {
        for (int i = 0; i < m; ++i) row_payoff[i] += game.at(i, col_choice);
        for (int j = 0; j < n; ++j) col_payoff[j] += game.at(row_choice, j);
        row_choice = static_cast<int>(std::max_element(row_payoff.begin(), row_payoff.end()) -
                                      row_payoff.begin());
        col_choice = static_cast<int>(std::min_element(col_payoff.begin(), col_payoff.end()) -
                                      col_payoff.begin());
        // The empirical mixtures certify one-sided bounds on the value.
        bracket.upper = std::min(bracket.upper, row_payoff[row_choice] / t);
        bracket.lower = std::max(bracket.lower, col_payoff[col_choice] / t);
    }
    return bracket;
}

// ---------------------------------------------------------------------------
// Eq.-(composition) oracle: the chain entry recomputed by the quadruple loop
// over observations and actions.
// ---------------------------------------------------------------------------

inline double gmc_entry(const posg::ProductPosg& product, const posg::Fsc& fsc_d,
                        const posg::Fsc& fsc_a, int from_sq, int from_gd, int from_ga, int to_sq,
                        int to_gd, int to_ga) {
    const posg::Posg& model = *product.model;
    const int s = product.model_state(from_sq);
    double total = 0.0;
    for (int od = 0; od < model.num_obs_d(); ++od)
        for (int oa = 0; oa < model.num_obs_a(); ++oa)
            for (int ud = 0; ud < model.num_actions_d(); ++ud)
                for (int ua = 0; ua < model.num_actions_a(); ++ua) {
                    double t_phi = 0.0;
                    for (const auto& [sq2, p] : product.row(from_sq, ud, ua))
                        if (sq2 == to_sq) t_phi = p;
                    total += model.od(s, od) * model.oa(s, oa) *
                             fsc_d.prob(from_gd, od, to_gd, ud) * fsc_a.prob(from_ga, oa, to_ga, ua) *
                             t_phi;
                }
    return total;
}

// ---------------------------------------------------------------------------
// Seeded random instances.
// ---------------------------------------------------------------------------

inline std::vector<double> random_distribution(posg::CounterRng& rng, int n, int max_support = 0) {
    std::vector<double> row(n, 0.0);
    int support = max_support > 0 ? std::min(max_support, n) : n;
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < support; ++i) std::swap(idx[i], idx[i + rng.next_int(n - i)]);
    double total = 0.0;
    for (int i = 0; i < support; ++i) {
        double w = -std::log(1.0 - rng.next_double());
        row[idx[i]] = w;
        total += w;
    }
    for (double& v : row) v /= total;
    return row;
}

inline posg::Posg random_posg(posg::CounterRng& rng, int ns, int nud, int nua, int nod, int noa) {
    posg::Posg model;
    for (int i = 0; i < ns; ++i) model.states.push_back("s" + std::to_string(i));
    model.initial = 0;
    for (int i = 0; i < nud; ++i) model.actions_d.push_back("d" + std::to_string(i));
    for (int i = 0; i < nua; ++i) model.actions_a.push_back("a" + std::to_string(i));
    for (int i = 0; i < nod; ++i) model.obs_d.push_back("od" + std::to_string(i));
    for (int i = 0; i < noa; ++i) model.obs_a.push_back("oa" + std::to_string(i));
    model.ap = {"p", "r"};
    model.label.resize(ns);
    for (int i = 0; i < ns; ++i) model.label[i] = static_cast<posg::Letter>(rng.next_int(4));
    model.trans.resize(static_cast<std::size_t>(ns) * nud * nua * ns);
    for (int s = 0; s < ns; ++s)
        for (int ud = 0; ud < nud; ++ud)
            for (int ua = 0; ua < nua; ++ua) {
                auto row = random_distribution(rng, ns, std::max(2, ns / 2 + 1));
                for (int s2 = 0; s2 < ns; ++s2) model.t(s, ud, ua, s2) = row[s2];
            }
    model.obs_kernel_d.resize(static_cast<std::size_t>(ns) * nod);
    model.obs_kernel_a.resize(static_cast<std::size_t>(ns) * noa);
    for (int s = 0; s < ns; ++s) {
        auto rd = random_distribution(rng, nod);
        auto ra = random_distribution(rng, noa);
        for (int o = 0; o < nod; ++o) model.obs_kernel_d[static_cast<std::size_t>(s) * nod + o] = rd[o];
        for (int o = 0; o < noa; ++o) model.obs_kernel_a[static_cast<std::size_t>(s) * noa + o] = ra[o];
    }
    return model;
}

inline posg::Dra random_dra(posg::CounterRng& rng, int num_states,
                            const std::vector<std::string>& ap) {
    posg::Dra dra;
    dra.ap = ap;
    dra.num_states = num_states;
    dra.initial = 0;
    const int nl = dra.num_letters();
    dra.delta.resize(static_cast<std::size_t>(num_states) * nl);
    for (auto& v : dra.delta) v = rng.next_int(num_states);
    posg::RabinPair pair;
    pair.l.assign(num_states, 0);
    pair.k.assign(num_states, 0);
    for (int q = 0; q < num_states; ++q) {
        pair.l[q] = rng.next_double() < 0.3 ? 1 : 0;
        pair.k[q] = rng.next_double() < 0.5 ? 1 : 0;
    }
    pair.k[rng.next_int(num_states)] = 1;  // keep the Inf part nonempty
    dra.pairs.push_back(std::move(pair));
    return dra;
}

inline posg::Fsc random_fsc(posg::CounterRng& rng, int ng, int num_obs, int num_actions,
                            posg::Agent agent) {
    const int labels = ng * num_actions;
    std::vector<char> mask(static_cast<std::size_t>(ng) * num_obs * labels, 0);
    for (int g = 0; g < ng; ++g)
        for (int o = 0; o < num_obs; ++o) {
            const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
            int live = 0;
            for (int z = 0; z < labels; ++z)
                if (rng.next_double() < 0.6) {
                    mask[base + z] = 1;
                    ++live;
                }
            if (!live) mask[base + rng.next_int(labels)] = 1;
        }
    posg::Fsc fsc = posg::uniform_fsc(ng, 0, num_obs, num_actions, mask, agent);
    // Replace the uniform rows with random distributions on the same support.
    for (int g = 0; g < ng; ++g)
        for (int o = 0; o < num_obs; ++o) {
            const std::size_t base = (static_cast<std::size_t>(g) * num_obs + o) * labels;
            double total = 0.0;
            for (int z = 0; z < labels; ++z)
                if (mask[base + z]) {
                    double w = 0.1 - std::log(1.0 - rng.next_double());
                    fsc.mu[base + z] = w;
                    total += w;
                } else {
                    fsc.mu[base + z] = 0.0;
                }
            for (int z = 0; z < labels; ++z) fsc.mu[base + z] /= total;
        }
    return fsc;
}

inline posg::Digraph random_digraph(posg::CounterRng& rng, int n, double edge_prob) {
    posg::Digraph graph;
    graph.adjacency.resize(n);
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (rng.next_double() < edge_prob) graph.adjacency[v].push_back(w);
    return graph;
}

// ---------------------------------------------------------------------------
// Self-owning chain built from an explicit transition matrix: single actions
// and observations, all-accepting objective, so the chain equals the matrix.
// ---------------------------------------------------------------------------

struct ChainFixture {
    posg::Posg model;
    posg::Dra dra;
    posg::ProductPosg product;
    posg::Fsc fsc_d;
    posg::Fsc fsc_a;
    posg::Gmc gmc;
};

inline std::unique_ptr<ChainFixture> chain_from_matrix(const std::vector<double>& matrix, int n) {
    auto fx = std::make_unique<ChainFixture>();
    fx->model.states.clear();
    for (int i = 0; i < n; ++i) fx->model.states.push_back("s" + std::to_string(i));
    fx->model.initial = 0;
    fx->model.actions_d = {"u"};
    fx->model.actions_a = {"v"};
    fx->model.obs_d = {"o"};
    fx->model.obs_a = {"o"};
    fx->model.ap = {"p"};
    fx->model.label.assign(n, 0);
    fx->model.trans = matrix;
    fx->model.obs_kernel_d.assign(n, 1.0);
    fx->model.obs_kernel_a.assign(n, 1.0);

    fx->dra = posg::ltl_to_dra(posg::ltl::parse_ltl("G true"), fx->model.ap);
    fx->product = posg::build_product(fx->model, fx->dra);
    fx->fsc_d = posg::uniform_fsc(1, 0, 1, 1, posg::full_mask(1, 1, 1), posg::Agent::defender);
    fx->fsc_a = posg::uniform_fsc(1, 0, 1, 1, posg::full_mask(1, 1, 1), posg::Agent::adversary);
    fx->gmc = posg::build_gmc(fx->product, fx->fsc_d, fx->fsc_a);
    return fx;
}

// Random absorbing chain: `absorbing` states self-loop, the rest mix.
inline std::vector<double> random_absorbing_matrix(posg::CounterRng& rng, int n, int absorbing) {
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) {
        if (s < absorbing) {
            matrix[static_cast<std::size_t>(s) * n + s] = 1.0;
            continue;
        }
        auto row = random_distribution(rng, n);
        for (int j = 0; j < n; ++j) matrix[static_cast<std::size_t>(s) * n + j] = row[j];
    }
    return matrix;
}

}  // namespace oracles
