#pragma once

#include <string>
#include <vector>

#include "posg/posg.hpp"

namespace posg {

/// Parses the JSON model document and validates it. Throws schema_error with
/// a JSON-pointer-style path on structural problems and validation_error
/// (carrying the full report) when an invariant fails.
Posg load_posg(const std::string& text);

std::string save_posg(const Posg& model);

/// FSC files reference observations and actions by name; the caller supplies
/// the name spaces (normally from the owning model).
Fsc load_fsc(const std::string& text, const std::vector<std::string>& obs_names,
             const std::vector<std::string>& action_names);

std::string save_fsc(const Fsc& fsc, const std::vector<std::string>& obs_names,
                     const std::vector<std::string>& action_names);

}  // namespace posg
