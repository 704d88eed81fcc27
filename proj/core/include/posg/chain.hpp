#pragma once

#include <optional>
#include <string>
#include <vector>

#include "posg/digraph.hpp"
#include "posg/posg.hpp"
#include "posg/product.hpp"

namespace posg {

/// Transition entries below this threshold do not induce digraph edges; it
/// guards against float dust from the composition sums.
inline constexpr double kEdgeThreshold = 1e-12;

/// The fully observable chain obtained by closing a product with one FSC per
/// agent. States are tuples (s, q, g_d, g_a) indexed lexicographically:
///   index = (sq * |G_d| + g_d) * |G_a| + g_a,  sq = s * |Q| + q.
struct Gmc {
    const ProductPosg* product = nullptr;
    int num_gd = 0;
    int num_ga = 0;
    std::vector<double> trans;     // dense num_states x num_states
    std::vector<RabinPair> pairs;  // lifted to chain states

    int num_states() const { return product->num_states() * num_gd * num_ga; }
    int index_of(int sq, int gd, int ga) const { return (sq * num_gd + gd) * num_ga + ga; }
    int product_state(int i) const { return i / (num_gd * num_ga); }
    int defender_node(int i) const { return (i / num_ga) % num_gd; }
    int adversary_node(int i) const { return i % num_ga; }
    int initial(const Fsc& fsc_d, const Fsc& fsc_a) const {
        return index_of(product->initial(), fsc_d.initial, fsc_a.initial);
    }

    double p(int from, int to) const {
        return trans[static_cast<std::size_t>(from) * num_states() + to];
    }

    std::string state_name(int i) const {
        return product->state_name(product_state(i)) + "|gd" + std::to_string(defender_node(i)) +
               "|ga" + std::to_string(adversary_node(i));
    }
};

/// Composes the product with the two controllers. Each transition
/// probability marginalizes both observation kernels and both FSC kernels
/// against the product kernel. Throws validation_error on dimension
/// mismatches.
Gmc build_gmc(const ProductPosg& product, const Fsc& fsc_d, const Fsc& fsc_a);

/// Digraph with an edge wherever the transition probability exceeds
/// kEdgeThreshold.
Digraph induce_digraph(const Gmc& gmc);

/// Communicating-class decomposition of a chain. `recurrent` flags sink
/// components; `feasible_pair` holds the witnessing acceptance pair index
/// for classes that intersect some lifted K(i) while avoiding the matching
/// L(i).
struct RecurrenceDecomposition {
    std::vector<std::vector<int>> classes;
    std::vector<char> recurrent;
    std::vector<std::optional<int>> feasible_pair;

    bool any_feasible() const {
        for (const auto& p : feasible_pair)
            if (p) return true;
        return false;
    }

    /// Chain states belonging to some feasible recurrent class.
    std::vector<char> feasible_state_set(int num_states) const;
};

RecurrenceDecomposition phi_feasible_recsets(const Gmc& gmc);

/// Absorption probabilities into `targets`, which must be a union of
/// recurrent classes of the chain. States inside targets map to 1, states in
/// other recurrent classes to 0, and transient states solve the dense linear
/// system x = P x + b restricted to transient indices.
std::vector<double> reach_probability(const Gmc& gmc, const std::vector<char>& targets);

}  // namespace posg
