#pragma once

#include "hkc/congest.hpp"
#include "hkc/graph.hpp"
#include "hkc/hkpr.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hkc {

// A node's sweep rank: value / degree, descending, ties by ascending ID.
// Estimated vectors rank by token counts so comparisons are exact.
struct RankKey {
    NodeId id = 0;
    std::uint32_t degree = 1;
    std::uint64_t count = 0;  // > 0 for estimated vectors
    double value = 0.0;
};

// True when `a` comes before `b` in the sweep ordering.
bool ranks_before(const RankKey& a, const RankKey& b) noexcept;

std::vector<RankKey> rank_keys(const Graph& g, const PhkprVector& vec);

// Support of `vec` in sweep order.
std::vector<NodeId> sweep_ordering(const Graph& g, const PhkprVector& vec);

// (L_j, R_j): neighbors of the j-th ordered node inside S_{j-1} / outside S_j.
struct PrefixDelta {
    std::uint32_t inside = 0;
    std::uint32_t outside = 0;
};

struct SweepStep {
    std::uint64_t volume = 0;
    std::uint64_t boundary = 0;
    Ratio ratio;
};

struct SweepResult {
    std::vector<NodeId> ordering;  // nodes the sweep considered, in order
    std::size_t best_prefix = 0;   // j*, 1-based
    NodeSet best_set;
    Ratio best_ratio;
    std::vector<SweepStep> profile;  // profile[j-1] describes S_j
    std::uint64_t rounds_charged = 0;
};

/**
 * Runs the prefix recursions
 *   |E(S_j, S̄_j)| = |E(S_{j-1}, S̄_{j-1})| - L_j + R_j
 *   vol(S_j)      = vol(S_{j-1}) + L_j + R_j
 * from |E(S_1, S̄_1)| = vol(S_1) = d_1 over the first `prefixes` entries
 * of `ordering` and picks the smallest ratio (earliest on ties).
 */
SweepResult sweep_from_deltas(std::span<const NodeId> ordering, std::span<const PrefixDelta> deltas,
                              std::size_t prefixes, std::uint64_t total_volume);

// Number of prefixes a sweep over `considered` ordered nodes evaluates:
// all of them, except that S = V is skipped.
std::size_t evaluable_prefixes(std::size_t considered, NodeId n, std::optional<std::size_t> max_prefix = {});

// Centralized sweep. max_prefix bounds both the ordering length and the
// number of prefixes. Throws std::invalid_argument on an empty vector or
// when no proper prefix exists.
SweepResult sweep_exact(const Graph& g, const PhkprVector& vec, std::optional<std::size_t> max_prefix = {});

struct SweepOptions {
    double eps = 0.1;
    double c = 1.0;
    // Hop radius around vec.seed that contains the support and in which the
    // tree may route. Defaults to K from walk_parameters(n, eps, c).
    std::optional<std::uint32_t> radius;

    // ceil(1/eps): the sweep never looks past this many ordered nodes.
    std::size_t truncation() const;
};

// Per-stage ledger of the two-phase sweep.
struct SweepCost {
    RoundStats ball;              // seed flood marking the radius ball
    RoundStats tree;              // max-rank flood building the BFS tree, plus child registration
    RoundStats ordering_upcast;   // Phase 1: top ranks to the root
    RoundStats ordering_flood;    // Phase 1: positions back down the tree
    RoundStats delta_upcast;      // Phase 2: (position, L, R) triples to the root
    RoundStats chain;             // chain sweep relay, when used
    std::uint32_t radius = 0;
    std::uint32_t tree_depth = 0;
    std::uint32_t max_tree_degree = 0;
    std::size_t support = 0;      // N
    std::size_t considered = 0;   // min(N, ceil(1/eps))
    NodeId root = 0;
};

struct DistributedSweep {
    SweepResult result;
    RoundStats stats;
    SweepCost cost;
};

// Two-phase sweep on the round engine: BFS tree rooted at the top-ranked
// node inside the radius ball, pipelined priority upcast of the top
// ceil(1/eps) ranks, flood of positions, then upcast of (L_j, R_j) to the
// root, which applies sweep_from_deltas.
DistributedSweep distributed_sweep(const Graph& g, const PhkprVector& vec, const SweepOptions& options,
                                   const SimConfig& config);

struct SweepCaps {
    std::uint64_t size = 0;    // sigma; 0 = no size cap
    std::uint64_t volume = 0;  // varsigma; 0 = no volume cap
};

// Phase 1 as in distributed_sweep, then a relay along the ordering: node j
// extends (vol, boundary, best) and forwards it along a shortest path to
// node j+1. The relay stops at the first prefix whose size exceeds
// caps.size or volume exceeds caps.volume; that prefix is not a candidate.
// S_1 is always evaluated. Throws std::invalid_argument if both caps are 0.
DistributedSweep chain_sweep(const Graph& g, const PhkprVector& vec, const SweepCaps& caps,
                             const SweepOptions& options, const SimConfig& config);

} // namespace hkc
