#include "posg/digraph.hpp"

#include <algorithm>
#include <deque>

namespace posg {

// Iterative Tarjan; the explicit stack keeps deep chains (large Markov
// chains are long paths) off the call stack.
std::vector<std::vector<int>> sccs(const Digraph& graph) {
    const int n = graph.num_nodes();
    std::vector<int> index(n, -1), lowlink(n, 0), edge_pos(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack, call_stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call_stack.push_back(root);
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call_stack.empty()) {
            int v = call_stack.back();
            if (edge_pos[v] < static_cast<int>(graph.adjacency[v].size())) {
                int w = graph.adjacency[v][edge_pos[v]++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call_stack.push_back(w);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            } else {
                call_stack.pop_back();
                if (!call_stack.empty())
                    lowlink[call_stack.back()] = std::min(lowlink[call_stack.back()], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    std::vector<int> component;
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        component.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(component.begin(), component.end());
                    components.push_back(std::move(component));
                }
            }
        }
    }
    return components;
}

std::vector<char> sink_components(const Digraph& graph,
                                  const std::vector<std::vector<int>>& components) {
    const int n = graph.num_nodes();
    std::vector<int> component_of(n, -1);
    for (std::size_t c = 0; c < components.size(); ++c)
        for (int v : components[c]) component_of[v] = static_cast<int>(c);
    std::vector<char> sink(components.size(), 1);
    for (int v = 0; v < n; ++v)
        for (int w : graph.adjacency[v])
            if (component_of[w] != component_of[v]) sink[component_of[v]] = 0;
    return sink;
}

std::vector<char> reachable_from(const Digraph& graph, int start) {
    std::vector<char> seen(graph.num_nodes(), 0);
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : graph.adjacency[v])
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
    }
    return seen;
}

}  // namespace posg
