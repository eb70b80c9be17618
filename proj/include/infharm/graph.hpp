#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace infharm {

struct Neighbor {
    int to;
    int edge;  // index into Graph::edge()
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Finite simple undirected graph with dense vertex ids 0..n-1 and stable
// string labels. Adjacency lists are sorted by neighbor id, so every
// iteration order in the library is deterministic.
class Graph {
public:
    Graph() = default;

    // Rejects out-of-range endpoints, self-loops, duplicate edges and
    // duplicate labels. Edge ids are assigned in sorted (min,max) order.
    static Graph build(std::vector<std::string> labels,
                       std::vector<std::pair<int, int>> edges);

    int vertex_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    std::span<const Neighbor> neighbors(int v) const {
        return {adjacency_[v].data(), adjacency_[v].size()};
    }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

    // Endpoints in (min,max) order.
    const std::pair<int, int>& edge(int e) const { return edges_[e]; }
    std::optional<int> edge_between(int u, int v) const;

    const std::string& label(int v) const { return labels_[v]; }
    std::optional<int> vertex_by_label(std::string_view label) const;

    bool connected() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

}  // namespace infharm
