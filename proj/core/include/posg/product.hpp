#pragma once

#include <string>
#include <utility>
#include <vector>

#include "posg/dra.hpp"
#include "posg/posg.hpp"

namespace posg {

/// Synchronous composition of a Posg with a Dra. The automaton steps on the
/// label of the destination model state; the initial automaton state is not
/// advanced on the label of s0. Observation kernels and action sets are
/// inherited from the model.
///
/// Without pruning (the default) product state (s, q) has index s * |Q| + q;
/// with pruning only reachable pairs are kept, in the same relative order.
struct ProductPosg {
    const Posg* model = nullptr;
    Dra dra;
    std::vector<std::pair<int, int>> state_list;  // product index -> (s, q)
    std::vector<int> dense_index;                 // s * |Q| + q -> product index or -1
    std::vector<RabinPair> pairs;                 // lifted to product indices

    // trans[(sq * |Ud| + ud) * |Ua| + ua] lists (sq', p) with p > 0; the q'
    // component is the unique automaton successor for the destination label.
    std::vector<std::vector<std::pair<int, double>>> trans;

    int num_states() const { return static_cast<int>(state_list.size()); }
    int model_state(int sq) const { return state_list[sq].first; }
    int dra_state(int sq) const { return state_list[sq].second; }
    int index_of(int s, int q) const { return dense_index[s * dra.num_states + q]; }
    int initial() const { return index_of(model->initial, dra.initial); }

    const std::vector<std::pair<int, double>>& row(int sq, int ud, int ua) const {
        return trans[(static_cast<std::size_t>(sq) * model->num_actions_d() + ud) *
                         model->num_actions_a() +
                     ua];
    }

    std::string state_name(int sq) const {
        return model->states[model_state(sq)] + "|q" + std::to_string(dra_state(sq));
    }
};

/// Builds the product. When `prune_unreachable` is set, (s, q) pairs not
/// reachable from the initial pair are dropped (off by default so indices
/// stay predictable).
/// Throws validation_error when the automaton uses an atom the model does
/// not declare.
ProductPosg build_product(const Posg& model, const Dra& dra, bool prune_unreachable = false);

/// Model-format JSON extended with a "dra_state" component per product state
/// name and the lifted acceptance pairs.
std::string save_product(const ProductPosg& product);

/// Product state (s, delta(q0, L(s))): the automaton component used when a
/// belief over model states has to pin one product state per s.
int canonical_product_state(const ProductPosg& product, int s);

}  // namespace posg
