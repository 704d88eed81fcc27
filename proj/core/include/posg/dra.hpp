#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "posg/ltl.hpp"

namespace posg {

/// A letter is a set of atomic propositions, encoded as a bitmask over an
/// ordered AP list (bit i set <=> ap[i] holds). The order is fixed when the
/// automaton (or model) is built and everything downstream iterates in it.
using Letter = std::uint32_t;

struct RabinPair {
    std::vector<char> l;  // membership by state index: visit finitely often
    std::vector<char> k;  // membership by state index: visit infinitely often
};

/// Deterministic Rabin automaton with a total transition function over the
/// alphabet 2^AP.
struct Dra {
    std::vector<std::string> ap;
    int num_states = 0;
    int initial = 0;
    std::vector<int> delta;  // num_states x num_letters, row-major
    std::vector<RabinPair> pairs;

    int num_letters() const { return 1 << static_cast<int>(ap.size()); }

    int step(int state, Letter letter) const {
        return delta[static_cast<std::size_t>(state) * num_letters() + letter];
    }
};

/// Checks totality of delta, index ranges, and that at least one acceptance
/// pair is present. Throws validation_error.
void validate_dra(const Dra& dra);

Letter letter_from_atoms(const std::vector<std::string>& ap,
                         const std::vector<std::string>& atoms);

/// Translates a formula from the supported fragment: conjunctions of
///   G !b, G a, G F a, F G a, F a, a U b
/// over atoms, plus the constants. Each template is a hand-verified
/// single-pair automaton; conjunction is a synchronous product (with a
/// round-robin counter when more than one G F conjunct is present), followed
/// by removal of unreachable states.
///
/// `ap_order`, when nonempty, fixes the alphabet bit order and must cover
/// every atom of the formula; by default atoms are used in order of first
/// appearance.
/// Throws unsupported_fragment_error when the formula does not match.
Dra ltl_to_dra(const ltl::FormulaPtr& formula,
               const std::vector<std::string>& ap_order = {});

/// Rabin acceptance on a lasso word prefix.cycle^omega.
/// Requires the run to return to the same automaton state after one cycle
/// traversal from the post-prefix state; callers unroll the cycle until it
/// does (see accepts_ultimately_periodic). Throws validation_error if the
/// cycle does not close or is empty.
bool dra_accepts_lasso(const Dra& dra, const std::vector<Letter>& prefix,
                       const std::vector<Letter>& cycle);

/// Convenience wrapper: pumps the cycle until the induced run closes, then
/// delegates to dra_accepts_lasso. Always terminates (at most |Q| pumpings).
bool accepts_ultimately_periodic(const Dra& dra, const std::vector<Letter>& prefix,
                                 const std::vector<Letter>& cycle);

/// Canonical renumbering by breadth-first search from the initial state in
/// letter order. Two equivalent-up-to-renaming automata with the same AP
/// order and pair layout canonicalize to identical values.
Dra canonicalize(const Dra& dra);

bool isomorphic(const Dra& a, const Dra& b);

}  // namespace posg
