#include "infharm/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "infharm/errors.hpp"

namespace infharm {

Graph Graph::build(std::vector<std::string> labels,
                   std::vector<std::pair<int, int>> edges) {
    const int n = static_cast<int>(labels.size());
    {
        std::set<std::string_view> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second)
                throw ParseError("duplicate vertex label \"" + l + "\"");
    }
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ParseError("edge endpoint out of range");
        if (u == v)
            throw ParseError("self-loop at \"" + labels[u] + "\" rejected");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw ParseError("duplicate edge rejected");

    Graph g;
    g.labels_ = std::move(labels);
    g.edges_ = std::move(edges);
    g.adjacency_.resize(n);
    for (int e = 0; e < static_cast<int>(g.edges_.size()); ++e) {
        auto [u, v] = g.edges_[e];
        g.adjacency_[u].push_back({v, e});
        g.adjacency_[v].push_back({u, e});
    }
    for (auto& list : g.adjacency_)
        std::sort(list.begin(), list.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    return g;
}

std::optional<int> Graph::edge_between(int u, int v) const {
    const auto& list = adjacency_[u];
    auto it = std::lower_bound(list.begin(), list.end(), v,
                               [](const Neighbor& a, int b) { return a.to < b; });
    if (it != list.end() && it->to == v) return it->edge;
    return std::nullopt;
}

std::optional<int> Graph::vertex_by_label(std::string_view label) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (labels_[v] == label) return v;
    return std::nullopt;
}

bool Graph::connected() const {
    const int n = vertex_count();
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const Neighbor& w : neighbors(v)) {
            if (!seen[w.to]) {
                seen[w.to] = 1;
                ++reached;
                stack.push_back(w.to);
            }
        }
    }
    return reached == n;
}

}  // namespace infharm
