#pragma once

#include <string>

#include "posg/dra.hpp"

namespace posg {

/// Reads a Hanoi Omega-Automata (v1) document restricted to the subset this
/// project exchanges: state-based acceptance, `acc-name: Rabin`, a single
/// initial state, explicit edge labels, deterministic and complete.
/// Acceptance set 2i is the Fin (L) part of pair i, 2i+1 the Inf (K) part.
/// Throws parse_error on malformed text and validation_error when the
/// automaton is nondeterministic, incomplete, or not Rabin.
Dra import_hoa(const std::string& text);

/// Writes the same restricted subset; import_hoa(export_hoa(d)) is
/// isomorphic to d.
std::string export_hoa(const Dra& dra);

}  // namespace posg
