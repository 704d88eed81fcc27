#include "posg/product.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "posg/errors.hpp"

namespace posg {

namespace {

// Maps a model letter (over model.ap) to the automaton alphabet (over
// dra.ap). Every automaton atom must exist in the model.
std::vector<Letter> letter_projection(const Posg& model, const Dra& dra) {
    std::vector<int> bit_map(dra.ap.size());
    for (std::size_t i = 0; i < dra.ap.size(); ++i) {
        auto it = std::find(model.ap.begin(), model.ap.end(), dra.ap[i]);
        if (it == model.ap.end())
            throw validation_error("AP mismatch: automaton atom '" + dra.ap[i] +
                                   "' is not declared by the model");
        bit_map[i] = static_cast<int>(it - model.ap.begin());
    }
    std::vector<Letter> projected(model.num_states());
    for (int s = 0; s < model.num_states(); ++s) {
        Letter letter = 0;
        for (std::size_t i = 0; i < dra.ap.size(); ++i)
            if ((model.label[s] >> bit_map[i]) & 1) letter |= Letter{1} << i;
        projected[s] = letter;
    }
    return projected;
}

}  // namespace

ProductPosg build_product(const Posg& model, const Dra& dra, bool prune_unreachable) {
    ProductPosg product;
    product.model = &model;
    product.dra = dra;

    const int ns = model.num_states();
    const int nq = dra.num_states;
    const int nud = model.num_actions_d();
    const int nua = model.num_actions_a();
    std::vector<Letter> letter_of = letter_projection(model, dra);

    // Automaton successor per destination model state: q' = delta(q, L(s')).
    std::vector<int> succ_q(static_cast<std::size_t>(nq) * ns);
    for (int q = 0; q < nq; ++q)
        for (int s2 = 0; s2 < ns; ++s2)
            succ_q[static_cast<std::size_t>(q) * ns + s2] = dra.step(q, letter_of[s2]);

    std::vector<char> keep(static_cast<std::size_t>(ns) * nq, 1);
    if (prune_unreachable) {
        keep.assign(static_cast<std::size_t>(ns) * nq, 0);
        std::deque<int> queue;
        int start = model.initial * nq + dra.initial;
        keep[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            int sq = queue.front();
            queue.pop_front();
            int s = sq / nq, q = sq % nq;
            for (int ud = 0; ud < nud; ++ud)
                for (int ua = 0; ua < nua; ++ua)
                    for (int s2 = 0; s2 < ns; ++s2) {
                        if (model.t(s, ud, ua, s2) <= 0.0) continue;
                        int next = s2 * nq + succ_q[static_cast<std::size_t>(q) * ns + s2];
                        if (!keep[next]) {
                            keep[next] = 1;
                            queue.push_back(next);
                        }
                    }
        }
    }

    product.dense_index.assign(static_cast<std::size_t>(ns) * nq, -1);
    for (int s = 0; s < ns; ++s)
        for (int q = 0; q < nq; ++q)
            if (keep[static_cast<std::size_t>(s) * nq + q]) {
                product.dense_index[s * nq + q] = static_cast<int>(product.state_list.size());
                product.state_list.emplace_back(s, q);
            }

    const int nsq = product.num_states();
    product.trans.resize(static_cast<std::size_t>(nsq) * nud * nua);
    for (int sq = 0; sq < nsq; ++sq) {
        auto [s, q] = product.state_list[sq];
        for (int ud = 0; ud < nud; ++ud)
            for (int ua = 0; ua < nua; ++ua) {
                auto& row = product.trans[(static_cast<std::size_t>(sq) * nud + ud) * nua + ua];
                for (int s2 = 0; s2 < ns; ++s2) {
                    double p = model.t(s, ud, ua, s2);
                    if (p <= 0.0) continue;
                    int next = product.dense_index[s2 * nq + succ_q[static_cast<std::size_t>(q) * ns + s2]];
                    if (next >= 0) row.emplace_back(next, p);
                }
            }
    }

    product.pairs.resize(dra.pairs.size());
    for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
        product.pairs[i].l.assign(nsq, 0);
        product.pairs[i].k.assign(nsq, 0);
        for (int sq = 0; sq < nsq; ++sq) {
            int q = product.state_list[sq].second;
            product.pairs[i].l[sq] = dra.pairs[i].l[q];
            product.pairs[i].k[sq] = dra.pairs[i].k[q];
        }
    }
    return product;
}

int canonical_product_state(const ProductPosg& product, int s) {
    const Posg& model = *product.model;
    const Dra& dra = product.dra;
    Letter letter = 0;
    for (std::size_t i = 0; i < dra.ap.size(); ++i) {
        auto it = std::find(model.ap.begin(), model.ap.end(), dra.ap[i]);
        if (it != model.ap.end() && ((model.label[s] >> (it - model.ap.begin())) & 1))
            letter |= Letter{1} << i;
    }
    return product.index_of(s, dra.step(dra.initial, letter));
}

std::string save_product(const ProductPosg& product) {
    using nlohmann::json;
    const Posg& model = *product.model;
    const int nsq = product.num_states();

    json doc;
    doc["schema_version"] = 1;
    std::vector<std::string> names;
    names.reserve(nsq);
    for (int sq = 0; sq < nsq; ++sq) names.push_back(product.state_name(sq));
    doc["states"] = names;
    doc["initial"] = names[product.initial()];
    doc["actions_d"] = model.actions_d;
    doc["actions_a"] = model.actions_a;
    doc["obs_d"] = model.obs_d;
    doc["obs_a"] = model.obs_a;
    doc["ap"] = model.ap;

    json dra_state = json::object();
    json label = json::object();
    for (int sq = 0; sq < nsq; ++sq) {
        dra_state[names[sq]] = product.dra_state(sq);
        json atoms = json::array();
        Letter l = model.label[product.model_state(sq)];
        for (std::size_t bit = 0; bit < model.ap.size(); ++bit)
            if ((l >> bit) & 1) atoms.push_back(model.ap[bit]);
        if (!atoms.empty()) label[names[sq]] = atoms;
    }
    doc["dra_state"] = dra_state;
    doc["label"] = label;

    json transitions = json::array();
    for (int sq = 0; sq < nsq; ++sq)
        for (int ud = 0; ud < model.num_actions_d(); ++ud)
            for (int ua = 0; ua < model.num_actions_a(); ++ua) {
                json row;
                row["s"] = names[sq];
                row["ud"] = model.actions_d[ud];
                row["ua"] = model.actions_a[ua];
                json dist = json::object();
                for (const auto& [next, p] : product.row(sq, ud, ua)) dist[names[next]] = p;
                row["dist"] = dist;
                transitions.push_back(row);
            }
    doc["transitions"] = transitions;

    auto dump_kernel = [&](const std::vector<std::string>& obs, bool defender) {
        json out = json::object();
        for (int sq = 0; sq < nsq; ++sq) {
            int s = product.model_state(sq);
            json row = json::object();
            for (std::size_t o = 0; o < obs.size(); ++o) {
                double p = defender ? model.od(s, static_cast<int>(o)) : model.oa(s, static_cast<int>(o));
                if (p != 0.0) row[obs[o]] = p;
            }
            out[names[sq]] = row;
        }
        return out;
    };
    doc["obs_kernel_d"] = dump_kernel(model.obs_d, true);
    doc["obs_kernel_a"] = dump_kernel(model.obs_a, false);

    json acceptance = json::array();
    for (const auto& pair : product.pairs) {
        json l = json::array(), k = json::array();
        for (int sq = 0; sq < nsq; ++sq) {
            if (pair.l[sq]) l.push_back(names[sq]);
            if (pair.k[sq]) k.push_back(names[sq]);
        }
        json entry;
        entry["L"] = l;
        entry["K"] = k;
        acceptance.push_back(entry);
    }
    doc["acceptance"] = acceptance;
    return doc.dump(2);
}

}  // namespace posg
