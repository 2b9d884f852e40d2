#include "hkc/graph.hpp"

#include "hkc/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace hkc {

Graph Graph::from_edges(NodeId n, std::span<const Edge> edges) {
    if (n == 0) {
        throw GraphError("graph has no nodes");
    }
    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) {
            throw GraphError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") references a node outside 0.." + std::to_string(n - 1));
        }
        if (u == v) {
            throw GraphError("self-loop at node " + std::to_string(u));
        }
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    Graph g;
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& e : directed) {
        ++g.offsets_[e.first + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.reserve(directed.size());
    for (const auto& e : directed) {
        g.targets_.push_back(e.second);
    }
    for (NodeId v = 0; v < n; ++v) {
        g.max_degree_ = std::max(g.max_degree_, g.degree(v));
    }
    g.reverse_.resize(g.targets_.size());
    for (NodeId u = 0; u < n; ++u) {
        for (std::size_t s = g.offsets_[u]; s < g.offsets_[u + 1]; ++s) {
            g.reverse_[s] = *g.slot(g.targets_[s], u);
        }
    }

    const auto dist = g.bfs_distances(0);
    for (NodeId v = 0; v < n; ++v) {
        if (dist[v] == UINT32_MAX) {
            throw GraphError("graph is disconnected: node 0 cannot reach node " + std::to_string(v));
        }
    }
    return g;
}

std::optional<std::size_t> Graph::slot(NodeId u, NodeId v) const noexcept {
    const auto nb = neighbors(u);
    const auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) {
        return std::nullopt;
    }
    return offsets_[u] + static_cast<std::size_t>(it - nb.begin());
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

std::vector<std::uint32_t> Graph::bfs_distances(NodeId source) const {
    std::vector<std::uint32_t> dist(node_count(), UINT32_MAX);
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : neighbors(u)) {
            if (dist[v] == UINT32_MAX) {
                dist[v] = dist[u] + 1;
                frontier.push(v);
            }
        }
    }
    return dist;
}

NodeSet::NodeSet(std::vector<NodeId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool NodeSet::contains(NodeId v) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), v);
}

NodeSet NodeSet::complement(NodeId n) const {
    std::vector<NodeId> out;
    out.reserve(n - std::min<std::size_t>(n, members_.size()));
    auto it = members_.begin();
    for (NodeId v = 0; v < n; ++v) {
        if (it != members_.end() && *it == v) {
            ++it;
        } else {
            out.push_back(v);
        }
    }
    return NodeSet(std::move(out));
}

Ratio Ratio::reduced() const noexcept {
    const auto g = std::gcd(num, den);
    return g == 0 ? *this : Ratio{num / g, den / g};
}

std::string Ratio::str() const {
    const auto r = reduced();
    return std::to_string(r.num) + "/" + std::to_string(r.den);
}

namespace {

std::vector<char> membership(const Graph& g, const NodeSet& s) {
    std::vector<char> in(g.node_count(), 0);
    for (NodeId v : s.members()) {
        if (v >= g.node_count()) {
            throw std::out_of_range("node " + std::to_string(v) + " is not in the graph");
        }
        in[v] = 1;
    }
    return in;
}

} // namespace

std::uint64_t volume(const Graph& g, const NodeSet& s) {
    std::uint64_t vol = 0;
    for (NodeId v : s.members()) {
        if (v >= g.node_count()) {
            throw std::out_of_range("node " + std::to_string(v) + " is not in the graph");
        }
        vol += g.degree(v);
    }
    return vol;
}

std::uint64_t edge_boundary(const Graph& g, const NodeSet& s) {
    const auto in = membership(g, s);
    std::uint64_t cut = 0;
    for (NodeId v : s.members()) {
        for (NodeId u : g.neighbors(v)) {
            cut += in[u] ? 0 : 1;
        }
    }
    return cut;
}

Ratio cheeger_ratio(const Graph& g, const NodeSet& s) {
    if (s.empty() || s.size() >= g.node_count()) {
        throw std::invalid_argument("Cheeger ratio undefined for the empty set or all of V");
    }
    const auto vol = volume(g, s);
    const auto other = g.total_volume() - vol;
    return Ratio{edge_boundary(g, s), std::min(vol, other)};
}

Graph load_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    NodeId max_id = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        std::string a, b, extra;
        fields >> a >> b;
        if (b.empty() || (fields >> extra)) {
            throw GraphError("line " + std::to_string(line_no) + ": expected two node IDs", line_no);
        }
        auto parse = [&](const std::string& tok) {
            std::uint64_t value = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc{} || ptr != tok.data() + tok.size() || value >= UINT32_MAX) {
                throw GraphError("line " + std::to_string(line_no) + ": invalid node ID '" + tok + "'",
                                 line_no);
            }
            return static_cast<NodeId>(value);
        };
        const NodeId u = parse(a);
        const NodeId v = parse(b);
        if (u == v) {
            throw GraphError("line " + std::to_string(line_no) + ": self-loop at node " + std::to_string(u),
                             line_no);
        }
        max_id = std::max({max_id, u, v});
        edges.emplace_back(u, v);
    }
    if (edges.empty()) {
        throw GraphError("edge list contains no edges");
    }
    return Graph::from_edges(max_id + 1, edges);
}

Graph load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open graph file '" + path + "'");
    }
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# n=" << g.node_count() << " m=" << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) {
        out << u << ' ' << v << '\n';
    }
}

} // namespace hkc
