#pragma once

#include <vector>

namespace posg {

/// Adjacency-list digraph over 0..n-1.
struct Digraph {
    std::vector<std::vector<int>> adjacency;

    int num_nodes() const { return static_cast<int>(adjacency.size()); }
};

/// Strongly connected components in reverse topological order (a component
/// is listed before any component that can reach it). Node order inside a
/// component and the component order are deterministic given the input.
std::vector<std::vector<int>> sccs(const Digraph& graph);

/// A component is a sink when no edge leaves it.
std::vector<char> sink_components(const Digraph& graph, const std::vector<std::vector<int>>& components);

/// Nodes reachable from `start` (including start itself).
std::vector<char> reachable_from(const Digraph& graph, int start);

}  // namespace posg
