#pragma once

#include "hkc/graph.hpp"

#include <cstdint>

// Built-in test instances.
namespace hkc::gen {

Graph path(NodeId n);
Graph cycle(NodeId n);
Graph complete(NodeId n);

// Two copies of K_k joined by the single edge (k-1, k). Nodes 0..k-1 form
// the first clique.
Graph two_cliques_bridge(NodeId k);

// Zachary's karate club network (34 nodes, 78 edges).
Graph karate_club();

// Random spanning tree (each node attaches to a uniformly chosen earlier
// node) plus up to `extra_edges` uniformly random extra edges. A nonzero
// `max_degree` caps every degree. Deterministic in `seed`.
Graph random_connected(NodeId n, std::uint64_t extra_edges, std::uint64_t seed, std::uint32_t max_degree = 0);

} // namespace hkc::gen
