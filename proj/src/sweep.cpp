#include "hkc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace hkc {

bool ranks_before(const RankKey& a, const RankKey& b) noexcept {
    if (a.count > 0 || b.count > 0) {
        const auto lhs = static_cast<unsigned __int128>(a.count) * b.degree;
        const auto rhs = static_cast<unsigned __int128>(b.count) * a.degree;
        if (lhs != rhs) {
            return lhs > rhs;
        }
    } else {
        const double lhs = a.value * b.degree;
        const double rhs = b.value * a.degree;
        if (lhs != rhs) {
            return lhs > rhs;
        }
    }
    return a.id < b.id;
}

std::vector<RankKey> rank_keys(const Graph& g, const PhkprVector& vec) {
    std::vector<RankKey> keys;
    keys.reserve(vec.entries.size());
    for (const auto& e : vec.entries) {
        if (e.node >= g.node_count()) {
            throw std::out_of_range("vector entry for node " + std::to_string(e.node) + " outside the graph");
        }
        keys.push_back({e.node, g.degree(e.node), vec.kind == VectorKind::estimated ? e.count : 0, e.value});
    }
    return keys;
}

std::vector<NodeId> sweep_ordering(const Graph& g, const PhkprVector& vec) {
    auto keys = rank_keys(g, vec);
    std::sort(keys.begin(), keys.end(), ranks_before);
    std::vector<NodeId> order;
    order.reserve(keys.size());
    for (const auto& k : keys) {
        order.push_back(k.id);
    }
    return order;
}

SweepResult sweep_from_deltas(std::span<const NodeId> ordering, std::span<const PrefixDelta> deltas,
                              std::size_t prefixes, std::uint64_t total_volume) {
    if (prefixes == 0 || prefixes > ordering.size() || deltas.size() < prefixes) {
        throw std::invalid_argument("sweep needs at least one proper prefix");
    }
    SweepResult out;
    out.ordering.assign(ordering.begin(), ordering.end());
    out.profile.reserve(prefixes);
    std::uint64_t volume = 0;
    std::uint64_t boundary = 0;
    for (std::size_t j = 0; j < prefixes; ++j) {
        const auto& d = deltas[j];
        if (j == 0) {
            boundary = d.outside;
            volume = d.outside;
        } else {
            boundary = boundary - d.inside + d.outside;
            volume += d.inside + d.outside;
        }
        const Ratio ratio{boundary, std::min(volume, total_volume - volume)};
        out.profile.push_back({volume, boundary, ratio});
        if (j == 0 || ratio < out.best_ratio) {
            out.best_ratio = ratio;
            out.best_prefix = j + 1;
        }
    }
    out.best_set = NodeSet(std::vector<NodeId>(ordering.begin(), ordering.begin() + out.best_prefix));
    return out;
}

std::size_t evaluable_prefixes(std::size_t considered, NodeId n, std::optional<std::size_t> max_prefix) {
    std::size_t p = std::min<std::size_t>(considered, n > 0 ? n - 1 : 0);
    if (max_prefix) {
        p = std::min(p, *max_prefix);
    }
    return p;
}

SweepResult sweep_exact(const Graph& g, const PhkprVector& vec, std::optional<std::size_t> max_prefix) {
    if (vec.empty()) {
        throw std::invalid_argument("cannot sweep an empty vector");
    }
    auto ordering = sweep_ordering(g, vec);
    if (max_prefix && ordering.size() > *max_prefix) {
        ordering.resize(*max_prefix);
    }
    const auto prefixes = evaluable_prefixes(ordering.size(), g.node_count(), max_prefix);
    if (prefixes == 0) {
        throw std::invalid_argument("sweep needs at least one proper prefix");
    }
    std::vector<std::uint32_t> position(g.node_count(), UINT32_MAX);
    for (std::size_t j = 0; j < ordering.size(); ++j) {
        position[ordering[j]] = static_cast<std::uint32_t>(j);
    }
    std::vector<PrefixDelta> deltas(prefixes);
    for (std::size_t j = 0; j < prefixes; ++j) {
        for (NodeId u : g.neighbors(ordering[j])) {
            if (position[u] < j) {
                ++deltas[j].inside;
            } else {
                ++deltas[j].outside;
            }
        }
    }
    return sweep_from_deltas(ordering, deltas, prefixes, g.total_volume());
}

std::size_t SweepOptions::truncation() const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("eps must lie in (0, 1)");
    }
    return static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-12));
}

namespace {

constexpr std::uint32_t kFar = UINT32_MAX;

std::uint64_t key_bits(const RankKey& k) noexcept {
    return bit_width_of(k.id) + bit_width_of(k.degree) + (k.count > 0 ? bit_width_of(k.count) : 64);
}

std::size_t child_index(const std::vector<NodeId>& children, NodeId from) {
    return static_cast<std::size_t>(std::lower_bound(children.begin(), children.end(), from) - children.begin());
}

// Seed flood: every node learns whether it lies within `radius` hops.
struct BallProtocol {
    struct State {
        std::uint32_t dist = kFar;
    };
    struct Message {
        std::uint32_t hops = 0;
    };

    NodeId seed;
    std::uint32_t radius;

    State init(const NodeContext& ctx) const { return {ctx.id == seed ? 0u : kFar}; }
    void send(const NodeContext& ctx, State& s, std::uint64_t round, Outbox<Message>& out) const {
        if (s.dist != kFar && s.dist + 1 == round && s.dist < radius) {
            for (std::size_t i = 0; i < ctx.neighbors.size(); ++i) {
                out.send_to_index(i, {s.dist + 1});
            }
        }
    }
    void receive(const NodeContext&, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            s.dist = std::min(s.dist, in.message.hops);
        }
    }
    bool done(const NodeContext&, const State&, std::uint64_t round) const { return round >= radius; }
    static std::uint64_t bits(const Message& m) noexcept { return bit_width_of(m.hops); }
};

// Max-rank flood inside the ball. The top-ranked node becomes the root and
// each node's parent is the neighbor that first delivered the root's key,
// which yields a BFS tree of the ball.
struct TreeProtocol {
    struct State {
        bool in_ball = false;
        std::optional<RankKey> best;
        std::uint32_t depth = 0;
        NodeId parent = 0;
        bool changed = false;
    };
    struct Message {
        RankKey key;
        std::uint32_t depth = 0;
    };

    const std::vector<BallProtocol::State>& ball;
    const std::vector<std::optional<RankKey>>& own;
    std::uint32_t radius;

    State init(const NodeContext& ctx) const {
        State s;
        s.in_ball = ball[ctx.id].dist != kFar;
        s.parent = ctx.id;
        if (s.in_ball && own[ctx.id]) {
            s.best = own[ctx.id];
            s.changed = true;
        }
        return s;
    }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (!s.changed) {
            return;
        }
        for (std::size_t i = 0; i < ctx.neighbors.size(); ++i) {
            out.send_to_index(i, {*s.best, s.depth});
        }
        s.changed = false;
    }
    void receive(const NodeContext&, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        if (!s.in_ball) {
            return;
        }
        for (const auto& in : inbox) {
            const auto& key = in.message.key;
            const std::uint32_t depth = in.message.depth + 1;
            if (!s.best || ranks_before(key, *s.best) || (key.id == s.best->id && depth < s.depth)) {
                s.best = key;
                s.depth = depth;
                s.parent = in.from;
                s.changed = true;
            }
        }
    }
    bool done(const NodeContext&, const State&, std::uint64_t round) const { return round >= 2ULL * radius; }
    static std::uint64_t bits(const Message& m) noexcept { return key_bits(m.key) + bit_width_of(m.depth); }
};

// Every non-root ball node tells its parent, so parents learn their children.
struct RegisterProtocol {
    struct State {
        std::vector<NodeId> children;
    };
    struct Message {};

    const std::vector<TreeProtocol::State>& tree;

    State init(const NodeContext&) const { return {}; }
    void send(const NodeContext& ctx, State&, std::uint64_t round, Outbox<Message>& out) const {
        const auto& t = tree[ctx.id];
        if (round == 1 && t.in_ball && t.parent != ctx.id) {
            out.send(t.parent, {});
        }
    }
    void receive(const NodeContext&, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            s.children.push_back(in.from);
        }
    }
    bool done(const NodeContext&, const State&, std::uint64_t round) const { return round >= 1; }
    static std::uint64_t bits(const Message&) noexcept { return 1; }
};

struct TreeView {
    const std::vector<TreeProtocol::State>& tree;
    const std::vector<RegisterProtocol::State>& links;

    bool active(NodeId v) const { return tree[v].in_ball; }
    bool is_root(NodeId v) const { return tree[v].in_ball && tree[v].parent == v; }
    NodeId parent(NodeId v) const { return tree[v].parent; }
    const std::vector<NodeId>& children(NodeId v) const { return links[v].children; }
};

// Phase 1 upcast: each subtree reports its top `cap` ranks to the parent in
// descending order, one per round. A node forwards its best pending key
// only once every unfinished child has a key queued, so the stream it emits
// is sorted.
struct RankUpcast {
    struct Message {
        std::optional<RankKey> key;
        bool last = false;
    };
    struct State {
        std::optional<RankKey> own;
        std::vector<std::deque<RankKey>> queues;
        std::vector<char> child_done;
        std::size_t emitted = 0;
        bool finished = false;
        std::vector<RankKey> collected;  // root only
    };

    TreeView view;
    const std::vector<std::optional<RankKey>>& own;
    std::size_t cap;

    // Index of the best candidate: children 0..k-1, k = own key. nullopt if
    // the node must wait for a child or has nothing left.
    static std::optional<std::size_t> pick(const State& s, bool& exhausted) {
        exhausted = false;
        std::optional<std::size_t> best;
        const RankKey* best_key = nullptr;
        for (std::size_t c = 0; c < s.queues.size(); ++c) {
            if (s.queues[c].empty()) {
                if (!s.child_done[c]) {
                    return std::nullopt;
                }
                continue;
            }
            if (best_key == nullptr || ranks_before(s.queues[c].front(), *best_key)) {
                best = c;
                best_key = &s.queues[c].front();
            }
        }
        if (s.own && (best_key == nullptr || ranks_before(*s.own, *best_key))) {
            best = s.queues.size();
        }
        exhausted = !best.has_value();
        return best;
    }

    static RankKey take(State& s, std::size_t source) {
        if (source == s.queues.size()) {
            const auto k = *s.own;
            s.own.reset();
            return k;
        }
        const auto k = s.queues[source].front();
        s.queues[source].pop_front();
        return k;
    }

    void drain_root(State& s) const {
        while (!s.finished) {
            bool exhausted = false;
            const auto source = s.emitted < cap ? pick(s, exhausted) : std::nullopt;
            if (s.emitted >= cap || exhausted) {
                s.finished = true;
                break;
            }
            if (!source) {
                break;
            }
            s.collected.push_back(take(s, *source));
            ++s.emitted;
        }
    }

    State init(const NodeContext& ctx) const {
        State s;
        if (!view.active(ctx.id)) {
            s.finished = true;
            return s;
        }
        s.own = own[ctx.id];
        s.queues.resize(view.children(ctx.id).size());
        s.child_done.assign(view.children(ctx.id).size(), 0);
        if (view.is_root(ctx.id)) {
            drain_root(s);
        }
        return s;
    }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (s.finished || view.is_root(ctx.id)) {
            return;
        }
        bool exhausted = false;
        const auto source = s.emitted < cap ? pick(s, exhausted) : std::nullopt;
        if (s.emitted >= cap || exhausted) {
            out.send(view.parent(ctx.id), {std::nullopt, true});
            s.finished = true;
            return;
        }
        if (!source) {
            return;
        }
        Message m{take(s, *source), false};
        ++s.emitted;
        bool after = false;
        if (s.emitted >= cap || (!pick(s, after) && after)) {
            m.last = true;
            s.finished = true;
        }
        out.send(view.parent(ctx.id), m);
    }
    void receive(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        const auto& kids = view.children(ctx.id);
        for (const auto& in : inbox) {
            const auto c = child_index(kids, in.from);
            if (in.message.key) {
                s.queues[c].push_back(*in.message.key);
            }
            if (in.message.last) {
                s.child_done[c] = 1;
            }
        }
        if (view.is_root(ctx.id)) {
            drain_root(s);
        }
    }
    bool done(const NodeContext&, const State& s, std::uint64_t) const { return s.finished; }
    static std::uint64_t bits(const Message& m) noexcept { return 1 + (m.key ? key_bits(*m.key) : 0); }
};

// Phase 1 flood: the root streams (id, position) down the tree, one pair
// per round per tree edge.
struct OrderFlood {
    struct Message {
        NodeId id = 0;
        std::uint32_t position = 0;  // 1-based
    };
    struct State {
        std::deque<Message> queue;
        std::vector<Message> known;
    };

    TreeView view;
    const std::vector<NodeId>& ordering;  // read by the root only

    State init(const NodeContext& ctx) const {
        State s;
        if (view.is_root(ctx.id)) {
            for (std::size_t j = 0; j < ordering.size(); ++j) {
                const Message m{ordering[j], static_cast<std::uint32_t>(j + 1)};
                s.known.push_back(m);
                if (!view.children(ctx.id).empty()) {
                    s.queue.push_back(m);
                }
            }
        }
        return s;
    }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (s.queue.empty()) {
            return;
        }
        for (NodeId c : view.children(ctx.id)) {
            out.send(c, s.queue.front());
        }
        s.queue.pop_front();
    }
    void receive(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            s.known.push_back(in.message);
            if (!view.children(ctx.id).empty()) {
                s.queue.push_back(in.message);
            }
        }
    }
    bool done(const NodeContext&, const State& s, std::uint64_t) const { return s.queue.empty(); }
    static std::uint64_t bits(const Message& m) noexcept { return bit_width_of(m.id) + bit_width_of(m.position); }
};

// Positions a node learned in the flood, for itself and its neighbors.
struct LocalPositions {
    std::uint32_t self = 0;  // 0: not ranked
    std::vector<std::uint32_t> neighbor;  // parallel to ctx.neighbors; 0: not ranked
};

LocalPositions local_positions(const Graph& g, NodeId v, const OrderFlood::State& s) {
    LocalPositions p;
    const auto nb = g.neighbors(v);
    p.neighbor.assign(nb.size(), 0);
    for (const auto& m : s.known) {
        if (m.id == v) {
            p.self = m.position;
        }
        const auto it = std::lower_bound(nb.begin(), nb.end(), m.id);
        if (it != nb.end() && *it == m.id) {
            p.neighbor[static_cast<std::size_t>(it - nb.begin())] = m.position;
        }
    }
    return p;
}

PrefixDelta delta_at(const LocalPositions& p) {
    PrefixDelta d;
    for (auto q : p.neighbor) {
        if (q != 0 && q < p.self) {
            ++d.inside;
        } else {
            ++d.outside;
        }
    }
    return d;
}

// Phase 2 upcast: ranked nodes send (position, L, R) to the root.
struct DeltaUpcast {
    struct Message {
        std::uint32_t position = 0;
        PrefixDelta delta;
    };
    struct State {
        std::deque<Message> queue;
        std::vector<Message> collected;  // root only
    };

    const Graph& g;
    TreeView view;
    const std::vector<OrderFlood::State>& flood;
    std::size_t expected;

    State init(const NodeContext& ctx) const {
        State s;
        if (!view.active(ctx.id)) {
            return s;
        }
        const auto pos = local_positions(g, ctx.id, flood[ctx.id]);
        if (pos.self != 0 && pos.self <= expected) {
            const Message m{pos.self, delta_at(pos)};
            if (view.is_root(ctx.id)) {
                s.collected.push_back(m);
            } else {
                s.queue.push_back(m);
            }
        }
        return s;
    }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (s.queue.empty() || view.is_root(ctx.id)) {
            return;
        }
        out.send(view.parent(ctx.id), s.queue.front());
        s.queue.pop_front();
    }
    void receive(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            if (view.is_root(ctx.id)) {
                s.collected.push_back(in.message);
            } else {
                s.queue.push_back(in.message);
            }
        }
    }
    bool done(const NodeContext& ctx, const State& s, std::uint64_t) const {
        return view.is_root(ctx.id) ? s.collected.size() >= expected : s.queue.empty();
    }
    static std::uint64_t bits(const Message& m) noexcept {
        return bit_width_of(m.position) + bit_width_of(m.delta.inside) + bit_width_of(m.delta.outside);
    }
};

// Everything Phase 1 leaves behind at the nodes.
struct OrderingPhase {
    std::vector<TreeProtocol::State> tree;
    std::vector<RegisterProtocol::State> links;
    std::vector<OrderFlood::State> flood;
    std::vector<NodeId> ordering;  // as computed by the root
    NodeId root = 0;
    SweepCost cost;
};

std::uint32_t resolve_radius(const Graph& g, const SweepOptions& options) {
    return options.radius ? *options.radius : walk_parameters(g.node_count(), options.eps, options.c).step_cap;
}

OrderingPhase establish_ordering(const Graph& g, const PhkprVector& vec, const SweepOptions& options,
                                 const SimConfig& config) {
    if (vec.empty()) {
        throw std::invalid_argument("cannot sweep an empty vector");
    }
    const NodeId n = g.node_count();
    const std::uint32_t radius = resolve_radius(g, options);
    const auto seed_dist = g.bfs_distances(vec.seed);
    std::vector<std::optional<RankKey>> own(n);
    for (const auto& key : rank_keys(g, vec)) {
        if (seed_dist[key.id] > radius) {
            throw std::invalid_argument("support node " + std::to_string(key.id) + " lies outside the radius-" +
                                        std::to_string(radius) + " ball around the seed");
        }
        own[key.id] = key;
    }

    OrderingPhase phase;
    phase.cost.radius = radius;
    phase.cost.support = vec.support_size();
    const std::size_t cap = options.truncation();

    auto ball = run_protocol(g, BallProtocol{vec.seed, radius}, config);
    phase.cost.ball = ball.stats;

    auto tree = run_protocol(g, TreeProtocol{ball.states, own, radius}, config);
    phase.tree = std::move(tree.states);
    auto links = run_protocol(g, RegisterProtocol{phase.tree}, config);
    phase.links = std::move(links.states);
    phase.cost.tree = tree.stats + links.stats;

    const TreeView view{phase.tree, phase.links};
    for (NodeId v = 0; v < n; ++v) {
        if (!view.active(v)) {
            continue;
        }
        if (view.is_root(v)) {
            phase.root = v;
        }
        phase.cost.tree_depth = std::max(phase.cost.tree_depth, phase.tree[v].depth);
        const auto degree = view.children(v).size() + (view.is_root(v) ? 0 : 1);
        phase.cost.max_tree_degree = std::max<std::uint32_t>(phase.cost.max_tree_degree,
                                                             static_cast<std::uint32_t>(degree));
    }

    auto upcast = run_protocol(g, RankUpcast{view, own, cap}, config);
    phase.cost.ordering_upcast = upcast.stats;
    auto collected = upcast.states[phase.root].collected;
    std::sort(collected.begin(), collected.end(), ranks_before);
    for (const auto& key : collected) {
        phase.ordering.push_back(key.id);
    }
    phase.cost.considered = phase.ordering.size();

    auto flood = run_protocol(g, OrderFlood{view, phase.ordering}, config);
    phase.cost.ordering_flood = flood.stats;
    phase.flood = std::move(flood.states);
    phase.cost.root = phase.root;
    return phase;
}

RoundStats phase_one_total(const SweepCost& c) {
    return c.ball + c.tree + c.ordering_upcast + c.ordering_flood;
}

// Relay of the running sweep state along the ordering.
struct ChainRelay {
    struct Message {
        NodeId dest = 0;
        std::uint32_t position = 0;  // prefix the destination evaluates
        std::uint64_t volume = 0;
        std::uint64_t boundary = 0;
        Ratio best;
        std::uint32_t best_position = 0;
    };
    struct State {
        std::optional<Message> pending;
        std::optional<SweepStep> step;
        std::optional<Message> final;  // set at the node where the relay ended
    };

    const Graph& g;
    const std::vector<OrderFlood::State>& flood;
    const std::vector<NodeId>& ordering;  // known to every node after the flood
    const std::vector<std::vector<std::uint32_t>>& dist_to;  // per position, hop distances
    SweepCaps caps;
    std::size_t prefixes;

    NodeId next_hop(NodeId self, std::uint32_t position) const {
        const auto& dist = dist_to[position - 1];
        for (NodeId u : g.neighbors(self)) {
            if (dist[u] + 1 == dist[self]) {
                return u;
            }
        }
        return self;
    }

    // Extends the relay message with prefix `position` at its own node.
    void evaluate(const NodeContext& ctx, State& s, Message m) const {
        const auto pos = local_positions(g, ctx.id, flood[ctx.id]);
        const auto d = delta_at(pos);
        const std::uint64_t volume = m.position == 1 ? d.outside : m.volume + d.inside + d.outside;
        const std::uint64_t boundary = m.position == 1 ? d.outside : m.boundary - d.inside + d.outside;
        const bool over = m.position > 1 && ((caps.size > 0 && m.position > caps.size) ||
                                             (caps.volume > 0 && volume > caps.volume));
        if (over) {
            s.final = m;
            return;
        }
        const Ratio ratio{boundary, std::min(volume, g.total_volume() - volume)};
        s.step = SweepStep{volume, boundary, ratio};
        if (m.position == 1 || ratio < m.best) {
            m.best = ratio;
            m.best_position = m.position;
        }
        m.volume = volume;
        m.boundary = boundary;
        if (m.position >= prefixes) {
            s.final = m;
            return;
        }
        m.position += 1;
        m.dest = ordering[m.position - 1];
        s.pending = m;
    }

    State init(const NodeContext& ctx) const {
        State s;
        if (!ordering.empty() && ctx.id == ordering.front()) {
            evaluate(ctx, s, Message{ctx.id, 1, 0, 0, Ratio{}, 0});
        }
        return s;
    }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (!s.pending) {
            return;
        }
        out.send(next_hop(ctx.id, s.pending->position), *s.pending);
        s.pending.reset();
    }
    void receive(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            if (in.message.dest == ctx.id) {
                evaluate(ctx, s, in.message);
            } else {
                s.pending = in.message;
            }
        }
    }
    bool done(const NodeContext&, const State& s, std::uint64_t) const { return !s.pending.has_value(); }
    static std::uint64_t bits(const Message& m) noexcept {
        return bit_width_of(m.dest) + bit_width_of(m.position) + bit_width_of(m.volume) + bit_width_of(m.boundary) +
               bit_width_of(m.best.num) + bit_width_of(m.best.den) + bit_width_of(m.best_position);
    }
};

} // namespace

DistributedSweep distributed_sweep(const Graph& g, const PhkprVector& vec, const SweepOptions& options,
                                   const SimConfig& config) {
    auto phase = establish_ordering(g, vec, options, config);
    const auto prefixes = evaluable_prefixes(phase.ordering.size(), g.node_count());
    if (prefixes == 0) {
        throw std::invalid_argument("sweep needs at least one proper prefix");
    }
    const TreeView view{phase.tree, phase.links};
    auto upcast = run_protocol(g, DeltaUpcast{g, view, phase.flood, prefixes}, config);
    phase.cost.delta_upcast = upcast.stats;

    auto triples = upcast.states[phase.root].collected;
    std::sort(triples.begin(), triples.end(),
              [](const auto& a, const auto& b) { return a.position < b.position; });
    std::vector<PrefixDelta> deltas;
    for (const auto& t : triples) {
        deltas.push_back(t.delta);
    }

    DistributedSweep out;
    out.result = sweep_from_deltas(phase.ordering, deltas, prefixes, g.total_volume());
    out.cost = phase.cost;
    out.stats = phase_one_total(out.cost) + out.cost.delta_upcast;
    out.result.rounds_charged = out.stats.rounds;
    return out;
}

DistributedSweep chain_sweep(const Graph& g, const PhkprVector& vec, const SweepCaps& caps,
                             const SweepOptions& options, const SimConfig& config) {
    if (caps.size == 0 && caps.volume == 0) {
        throw std::invalid_argument("chain sweep needs a size or volume cap");
    }
    auto phase = establish_ordering(g, vec, options, config);
    const auto prefixes = evaluable_prefixes(phase.ordering.size(), g.node_count());
    if (prefixes == 0) {
        throw std::invalid_argument("sweep needs at least one proper prefix");
    }
    // Shortest-path routing toward each ordered node is assumed known.
    std::vector<std::vector<std::uint32_t>> dist_to;
    dist_to.reserve(prefixes);
    for (std::size_t j = 0; j < prefixes; ++j) {
        dist_to.push_back(g.bfs_distances(phase.ordering[j]));
    }
    auto relay = run_protocol(g, ChainRelay{g, phase.flood, phase.ordering, dist_to, caps, prefixes}, config);
    phase.cost.chain = relay.stats;

    DistributedSweep out;
    std::optional<ChainRelay::Message> final;
    for (const auto& s : relay.states) {
        if (s.final) {
            final = s.final;
        }
    }
    if (!final) {
        throw SimulationError("chain sweep relay ended without a result");
    }
    SweepResult& r = out.result;
    for (std::size_t j = 0; j < prefixes; ++j) {
        const auto& step = relay.states[phase.ordering[j]].step;
        if (!step) {
            break;
        }
        r.profile.push_back(*step);
    }
    r.ordering = phase.ordering;
    r.best_prefix = final->best_position;
    r.best_ratio = final->best;
    r.best_set = NodeSet(std::vector<NodeId>(phase.ordering.begin(), phase.ordering.begin() + r.best_prefix));
    out.cost = phase.cost;
    out.stats = phase_one_total(out.cost) + out.cost.chain;
    r.rounds_charged = out.stats.rounds;
    return out;
}

} // namespace hkc
