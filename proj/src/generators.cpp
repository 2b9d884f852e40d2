#include "hkc/generators.hpp"

#include "hkc/rng.hpp"

#include <set>
#include <stdexcept>
#include <vector>

namespace hkc::gen {

Graph path(NodeId n) {
    if (n < 2) {
        return Graph::from_edges(1, {});
    }
    std::vector<Edge> edges;
    for (NodeId v = 0; v + 1 < n; ++v) {
        edges.emplace_back(v, v + 1);
    }
    return Graph::from_edges(n, edges);
}

Graph cycle(NodeId n) {
    if (n < 3) {
        throw std::invalid_argument("cycle needs at least 3 nodes");
    }
    std::vector<Edge> edges;
    for (NodeId v = 0; v < n; ++v) {
        edges.emplace_back(v, (v + 1) % n);
    }
    return Graph::from_edges(n, edges);
}

Graph complete(NodeId n) {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

Graph two_cliques_bridge(NodeId k) {
    if (k < 2) {
        throw std::invalid_argument("clique size must be at least 2");
    }
    std::vector<Edge> edges;
    for (NodeId base : {NodeId{0}, k}) {
        for (NodeId u = 0; u < k; ++u) {
            for (NodeId v = u + 1; v < k; ++v) {
                edges.emplace_back(base + u, base + v);
            }
        }
    }
    edges.emplace_back(k - 1, k);
    return Graph::from_edges(2 * k, edges);
}

Graph karate_club() {
    static constexpr Edge kEdges[] = {
        {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},  {0, 11},
        {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},
        {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},
        {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
        {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33},
        {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29},
        {23, 32}, {23, 33}, {24, 25}, {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
        {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
    };
    return Graph::from_edges(34, kEdges);
}

Graph random_connected(NodeId n, std::uint64_t extra_edges, std::uint64_t seed, std::uint32_t max_degree) {
    if (n == 0) {
        throw std::invalid_argument("random graph needs at least one node");
    }
    if (max_degree == 1 && n > 2) {
        throw std::invalid_argument("max_degree 1 cannot connect more than 2 nodes");
    }
    Rng rng = Rng::keyed(seed, {0x67656eULL, n});
    std::vector<std::uint32_t> deg(n, 0);
    std::set<Edge> edges;
    auto room = [&](NodeId v) { return max_degree == 0 || deg[v] < max_degree; };
    auto add = [&](NodeId u, NodeId v) {
        edges.emplace(std::min(u, v), std::max(u, v));
        ++deg[u];
        ++deg[v];
    };

    // Tree: with a degree cap, fall back to scanning when the drawn parent is full.
    for (NodeId v = 1; v < n; ++v) {
        NodeId u = static_cast<NodeId>(rng.below(v));
        for (NodeId probe = 0; !room(u) && probe < v; ++probe) {
            u = (u + 1) % v;
        }
        if (!room(u)) {
            throw std::invalid_argument("degree cap too small to build a spanning tree");
        }
        add(u, v);
    }

    const std::uint64_t attempts = extra_edges * 20 + 100;
    std::uint64_t added = 0;
    for (std::uint64_t a = 0; a < attempts && added < extra_edges && n > 2; ++a) {
        const auto u = static_cast<NodeId>(rng.below(n));
        const auto v = static_cast<NodeId>(rng.below(n));
        if (u == v || !room(u) || !room(v) || edges.count({std::min(u, v), std::max(u, v)}) != 0) {
            continue;
        }
        add(u, v);
        ++added;
    }
    const std::vector<Edge> list(edges.begin(), edges.end());
    return Graph::from_edges(n, list);
}

} // namespace hkc::gen
