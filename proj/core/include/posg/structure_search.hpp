#pragma once

#include <optional>
#include <vector>

#include "posg/chain.hpp"
#include "posg/posg.hpp"
#include "posg/product.hpp"

namespace posg {

/// An admissible controller-structure pair: supports for both FSC kernels
/// such that the chain induced by their uniform instantiations has a
/// feasible recurrent set. `witness_state` is a chain state from the Good
/// set of the emitting pass that is recurrent in the pruned chain.
struct StructurePair {
    int num_gd = 0;
    int num_ga = 0;
    std::vector<char> mask_d;
    std::vector<char> mask_a;
    int witness_state = -1;
    int pair_index = -1;

    bool operator==(const StructurePair&) const = default;
};

/// Bad/Good sets for one component and acceptance pair:
///   Bad  = states outside the component reachable from it in one step,
///          plus component states inside the lifted L(i);
///   Good = component states inside the lifted K(i).
/// Both are returned sorted ascending.
struct BadGoodSets {
    std::vector<int> bad;
    std::vector<int> good;
};

BadGoodSets bad_good_sets(const Gmc& gmc, const Digraph& digraph,
                          const std::vector<int>& component, int pair_index);

/// Kills defender mask entries that can route the chain from `state` into
/// `bad_state`: for every defender action with some adversary action making
/// the composed transition positive under the current masks, the action is
/// zeroed for every participating defender observation, across all node
/// pairs. Mutates mask_d in place.
void forbid_defender(const ProductPosg& product, int num_gd, int num_ga, int state, int bad_state,
                     std::vector<char>& mask_d, const std::vector<char>& mask_a);

/// Kills adversary mask entries whose action cannot avoid `good_state` from
/// `state`: an adversary action is useless at observation o_a when every
/// defender action keeps a positive route into the Good state. Mutates
/// mask_a in place.
void prune_adversary(const ProductPosg& product, int num_gd, int num_ga, int state, int good_state,
                     const std::vector<char>& mask_d, std::vector<char>& mask_a);

struct CandidateOptions {
    // Initial structure supports; empty means all-ones. They shape the
    // component decomposition that scopes each pruning pass.
    std::vector<char> init_mask_d;
    std::vector<char> init_mask_a;
};

/// The fixed-size structure search. Iterates component x acceptance-pair
/// passes over the chain induced by the initial structures; each pass
/// re-seeds the working masks to all-ones, prunes against its Bad set
/// (processing Bad states in ascending index order against the least Good
/// state), and contributes its masks when a Good state is recurrent in the
/// re-induced chain and the chain has a feasible recurrent set. Duplicate
/// pairs are dropped. An empty result means no structure of these sizes was
/// certified; callers may retry with different initial structures or a
/// larger defender size.
std::vector<StructurePair> candidate_structures(const ProductPosg& product, int num_gd, int num_ga,
                                                const CandidateOptions& options = {});

/// Direct admissibility check for a mask pair: instantiate both masks
/// uniformly, build the chain, and look for a feasible recurrent set. On
/// success returns the pair with its witness (least state of the first
/// feasible class) and acceptance-pair index.
std::optional<StructurePair> verify_structure_pair(const ProductPosg& product, int num_gd,
                                                   int num_ga, std::vector<char> mask_d,
                                                   std::vector<char> mask_a);

struct SearchOptions {
    int attempts = 32;         // pruning-pass restarts; attempt 0 is all-ones
    int sampling_attempts = 64;  // directly sampled-and-verified mask pairs
    std::uint64_t seed = 0;
    int max_candidates = 64;   // stop early once this many distinct pairs exist
};

/// Layered structure search. First the pruning passes run from the all-ones
/// initial structure and then from a seeded family of sparse random initial
/// structures (the initial structure only scopes the passes, so restarts
/// explore different prunings). Because the pruning passes are incomplete
/// and their observation-global forbids can empty out on dense-residual
/// models, a sampling stage follows: global action-subset masks and sparse
/// random mask pairs, each admitted only if verify_structure_pair certifies
/// a feasible recurrent set. Every returned pair therefore carries the same
/// guarantee regardless of which stage produced it.
std::vector<StructurePair> search_structures(const ProductPosg& product, int num_gd, int num_ga,
                                             const SearchOptions& options);

}  // namespace posg
