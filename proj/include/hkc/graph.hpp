#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hkc {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/**
 * Undirected, connected, simple graph in CSR form.
 *
 * Neighbor lists are sorted ascending. Directed edge slots (u -> adj(u)[i])
 * are numbered offset(u) + i, which the round engine uses to address
 * per-edge message buffers. Immutable after construction.
 */
class Graph {
public:
    Graph() = default;

    // Builds a graph over nodes 0..n-1. Duplicate edges (in either
    // orientation) collapse to one; self-loops, out-of-range endpoints and
    // disconnected results throw GraphError.
    static Graph from_edges(NodeId n, std::span<const Edge> edges);

    NodeId node_count() const noexcept { return static_cast<NodeId>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::uint64_t edge_count() const noexcept { return targets_.size() / 2; }
    std::uint64_t total_volume() const noexcept { return targets_.size(); }

    std::uint32_t degree(NodeId v) const noexcept {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }
    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {targets_.data() + offsets_[v], degree(v)};
    }
    std::uint32_t max_degree() const noexcept { return max_degree_; }

    std::size_t slot_begin(NodeId v) const noexcept { return offsets_[v]; }
    std::size_t slot_count() const noexcept { return targets_.size(); }
    // Slot index of the directed edge u -> v, or nullopt if not adjacent.
    std::optional<std::size_t> slot(NodeId u, NodeId v) const noexcept;
    // For slot u -> v, the slot of v -> u.
    std::size_t reverse_slot(std::size_t s) const noexcept { return reverse_[s]; }

    bool has_edge(NodeId u, NodeId v) const noexcept { return slot(u, v).has_value(); }

    // Unique undirected edges with u < v, sorted.
    std::vector<Edge> edges() const;

    // Hop distances from `source`; unreachable never happens (connected).
    std::vector<std::uint32_t> bfs_distances(NodeId source) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> targets_;
    std::vector<std::size_t> reverse_;
    std::uint32_t max_degree_ = 0;
};

// Sorted, duplicate-free set of node IDs.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::vector<NodeId> members);

    std::span<const NodeId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(NodeId v) const noexcept;

    // V \ S over a graph of n nodes.
    NodeSet complement(NodeId n) const;

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<NodeId> members_;
};

// Exact nonnegative rational num/den with den > 0. Comparison is by
// cross-multiplication, so 1/3 == 2/6.
struct Ratio {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    Ratio reduced() const noexcept;
    std::string str() const;  // "num/den" in lowest terms

    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
        const auto lhs = static_cast<unsigned __int128>(a.num) * b.den;
        const auto rhs = static_cast<unsigned __int128>(b.num) * a.den;
        return lhs <=> rhs;
    }
    friend bool operator==(const Ratio& a, const Ratio& b) noexcept { return (a <=> b) == 0; }
};

std::uint64_t volume(const Graph& g, const NodeSet& s);

// |E(S, V\S)| by direct scan.
std::uint64_t edge_boundary(const Graph& g, const NodeSet& s);

// |E(S, S̄)| / min(vol S, vol S̄). Throws std::invalid_argument when S is
// empty or all of V.
Ratio cheeger_ratio(const Graph& g, const NodeSet& s);

// Edge-list text: "u v" per line, '#' lines and blank lines ignored.
Graph load_edge_list(std::istream& in);
Graph load_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

} // namespace hkc
