#pragma once

#include "hkc/error.hpp"
#include "hkc/exec.hpp"
#include "hkc/graph.hpp"

#include <algorithm>
#include <concepts>
#include <exception>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hkc {

// paper: one charged round per logical round, overload only recorded in
// max_edge_bits. strict: an edge carrying b bits costs ceil(b / bandwidth)
// rounds and the slowest edge sets the round's charge.
enum class CongestionMode { paper, strict };

const char* to_string(CongestionMode mode) noexcept;

struct SimConfig {
    CongestionMode mode = CongestionMode::paper;
    double beta = 2.0;                // bandwidth = ceil(beta * log2 n) unless overridden
    std::uint64_t bandwidth_bits = 0;  // 0: derive from beta
    std::uint64_t seed = 0;
    std::uint64_t round_cap = 1'000'000;
    Exec exec = Exec::parallel;
    std::ostream* trace = nullptr;     // round-by-round (edge, bits) lines

    std::uint64_t bandwidth(NodeId n) const;
};

struct RoundStats {
    std::uint64_t rounds = 0;            // charged rounds
    std::uint64_t logical_rounds = 0;    // protocol rounds executed
    std::uint64_t messages = 0;          // M
    std::uint64_t max_node_messages = 0; // C: max over (node, round) of max(sent, received)
    std::uint64_t max_edge_bits = 0;     // per direction, per round
    std::uint64_t congestion_events = 0; // strict-mode rounds that had to be split
    std::uint64_t total_bits = 0;

    // Sequential composition of two runs.
    RoundStats& operator+=(const RoundStats& other) noexcept;
    friend RoundStats operator+(RoundStats a, const RoundStats& b) noexcept { return a += b; }
    friend bool operator==(const RoundStats&, const RoundStats&) = default;
};

// What a node knows about the network: n, its own ID and degree, its
// neighbors' IDs, and the run seed for keyed randomness.
struct NodeContext {
    NodeId id = 0;
    NodeId n = 0;
    std::span<const NodeId> neighbors;
    std::uint64_t seed = 0;

    std::uint32_t degree() const noexcept { return static_cast<std::uint32_t>(neighbors.size()); }
};

template <typename Message>
struct Incoming {
    NodeId from;
    Message message;
};

// Write side of one node's edges for one round.
template <typename Message>
class Outbox {
public:
    Outbox(const Graph& g, NodeId self, std::span<std::vector<Message>> slots) : g_(g), self_(self), slots_(slots) {}

    // Throws SimulationError unless `to` is a neighbor.
    void send(NodeId to, Message message) {
        const auto s = g_.slot(self_, to);
        if (!s) {
            throw SimulationError("node " + std::to_string(self_) + " addressed non-neighbor " + std::to_string(to));
        }
        slots_[*s - g_.slot_begin(self_)].push_back(std::move(message));
    }

    // Send along the i-th incident edge (neighbors are sorted by ID).
    void send_to_index(std::size_t i, Message message) { slots_[i].push_back(std::move(message)); }

private:
    const Graph& g_;
    NodeId self_;
    std::span<std::vector<Message>> slots_;
};

/**
 * A node-local state machine. Each round has a send step (at the start of
 * the round) and a receive step (at its end, after every message sent this
 * round has arrived). done() is asked after `round` completed rounds; the
 * run ends once every node reports done.
 */
template <typename P>
concept Protocol = requires(const P& p, const NodeContext& ctx, typename P::State& state,
                            const typename P::State& cstate, std::uint64_t round,
                            Outbox<typename P::Message>& out,
                            std::span<const Incoming<typename P::Message>> inbox,
                            const typename P::Message& msg) {
    { p.init(ctx) } -> std::same_as<typename P::State>;
    p.send(ctx, state, round, out);
    p.receive(ctx, state, round, inbox);
    { p.done(ctx, cstate, round) } -> std::convertible_to<bool>;
    { P::bits(msg) } -> std::convertible_to<std::uint64_t>;
};

template <typename State>
struct RunResult {
    std::vector<State> states;
    RoundStats stats;
};

// Called after each completed round with the states of all nodes.
template <typename State>
using RoundObserver = std::function<void(std::uint64_t round, std::span<const State> states)>;

namespace detail {

// Runs `body(v)` for every node, in parallel if requested. The first
// exception (lowest node ID) is rethrown on the calling thread.
template <typename Body>
void for_each_node(NodeId n, Exec exec, Body&& body) {
    if (exec == Exec::serial) {
        for (NodeId v = 0; v < n; ++v) {
            body(v);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t v = 0; v < count; ++v) {
        try {
            body(static_cast<NodeId>(v));
        } catch (...) {
            errors[v] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

void write_trace_line(std::ostream& out, std::uint64_t round, NodeId from, NodeId to, std::uint64_t bits,
                      std::uint64_t messages);

} // namespace detail

/**
 * Round-synchronous CONGEST execution of `protocol` on `g`.
 *
 * Messages sent in round i are received at the end of round i. Results and
 * statistics are identical for Exec::serial and Exec::parallel: handlers
 * only touch their own state and edge slots, inboxes are ordered by sender
 * ID then send order, and all ledgers are integer reductions.
 */
template <Protocol P>
RunResult<typename P::State> run_protocol(const Graph& g, const P& protocol, const SimConfig& config,
                                          const RoundObserver<typename P::State>& observer = {}) {
    using State = typename P::State;
    using Message = typename P::Message;

    const NodeId n = g.node_count();
    const std::uint64_t bandwidth = config.bandwidth(n);
    auto context = [&](NodeId v) { return NodeContext{v, n, g.neighbors(v), config.seed}; };

    RunResult<State> result;
    result.states.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
        result.states.push_back(protocol.init(context(v)));
    }

    auto all_done = [&](std::uint64_t round) {
        for (NodeId v = 0; v < n; ++v) {
            if (!protocol.done(context(v), result.states[v], round)) {
                return false;
            }
        }
        return true;
    };

    std::vector<std::vector<Message>> slots(g.slot_count());
    std::vector<std::uint64_t> slot_bits(g.slot_count(), 0);
    std::vector<std::uint64_t> load(n, 0);
    RoundStats& stats = result.stats;

    std::uint64_t round = 0;
    while (!all_done(round)) {
        if (round >= config.round_cap) {
            throw SimulationError("non-termination suspected: round cap " + std::to_string(config.round_cap) +
                                  " reached");
        }
        ++round;

        detail::for_each_node(n, config.exec, [&](NodeId v) {
            const std::span<std::vector<Message>> own(slots.data() + g.slot_begin(v), g.degree(v));
            Outbox<Message> out(g, v, own);
            const auto ctx = context(v);
            protocol.send(ctx, result.states[v], round, out);
        });

        detail::for_each_node(n, config.exec, [&](NodeId v) {
            std::uint64_t sent = 0;
            for (std::size_t s = g.slot_begin(v), e = s + g.degree(v); s < e; ++s) {
                std::uint64_t bits = 0;
                for (const auto& m : slots[s]) {
                    bits += P::bits(m);
                }
                slot_bits[s] = bits;
                sent += slots[s].size();
            }
            load[v] = sent;
        });

        std::uint64_t round_messages = 0;
        std::uint64_t round_max_bits = 0;
        std::uint64_t round_bits = 0;
        for (NodeId v = 0; v < n; ++v) {
            std::uint64_t received = 0;
            for (std::size_t s = g.slot_begin(v), e = s + g.degree(v); s < e; ++s) {
                received += slots[g.reverse_slot(s)].size();
                round_max_bits = std::max(round_max_bits, slot_bits[s]);
                round_bits += slot_bits[s];
            }
            round_messages += load[v];
            stats.max_node_messages = std::max({stats.max_node_messages, load[v], received});
        }
        if (config.trace != nullptr) {
            for (NodeId u = 0; u < n; ++u) {
                const auto nb = g.neighbors(u);
                for (std::size_t i = 0; i < nb.size(); ++i) {
                    const auto s = g.slot_begin(u) + i;
                    if (!slots[s].empty()) {
                        detail::write_trace_line(*config.trace, round, u, nb[i], slot_bits[s], slots[s].size());
                    }
                }
            }
        }

        detail::for_each_node(n, config.exec, [&](NodeId v) {
            std::vector<Incoming<Message>> inbox;
            const auto nb = g.neighbors(v);
            for (std::size_t i = 0; i < nb.size(); ++i) {
                for (const auto& m : slots[g.reverse_slot(g.slot_begin(v) + i)]) {
                    inbox.push_back({nb[i], m});
                }
            }
            const auto ctx = context(v);
            protocol.receive(ctx, result.states[v], round, std::span<const Incoming<Message>>(inbox));
        });
        for (auto& s : slots) {
            s.clear();
        }

        std::uint64_t charged = 1;
        if (config.mode == CongestionMode::strict && round_max_bits > bandwidth) {
            charged = (round_max_bits + bandwidth - 1) / bandwidth;
            ++stats.congestion_events;
        }
        stats.rounds += charged;
        stats.logical_rounds += 1;
        stats.messages += round_messages;
        stats.total_bits += round_bits;
        stats.max_edge_bits = std::max(stats.max_edge_bits, round_max_bits);

        if (observer) {
            observer(round, std::span<const State>(result.states));
        }
    }
    return result;
}

// Minimal binary width of `value` (at least 1 bit).
constexpr std::uint64_t bit_width_of(std::uint64_t value) noexcept {
    std::uint64_t w = 1;
    while (value >>= 1) {
        ++w;
    }
    return w;
}

} // namespace hkc
