#include "hkc/congest.hpp"
#include "hkc/generators.hpp"
#include "hkc/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace hkc;

namespace {

// Forwards a one-bit token from node `origin` away from it along a path.
struct Flood {
    struct State {
        bool has = false;
        bool forwarded = false;
    };
    struct Message {};

    NodeId origin;

    State init(const NodeContext& ctx) const { return {ctx.id == origin, false}; }
    void send(const NodeContext& ctx, State& s, std::uint64_t, Outbox<Message>& out) const {
        if (s.has && !s.forwarded) {
            for (NodeId u : ctx.neighbors) {
                if (u > ctx.id) {
                    out.send(u, {});
                }
            }
            s.forwarded = true;
        }
    }
    void receive(const NodeContext&, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        if (!inbox.empty()) {
            s.has = true;
        }
    }
    bool done(const NodeContext& ctx, const State& s, std::uint64_t) const {
        const bool has_successor = !ctx.neighbors.empty() && ctx.neighbors.back() > ctx.id;
        return s.forwarded || (s.has && !has_successor) || (!s.has && ctx.id == origin);
    }
    static std::uint64_t bits(const Message&) noexcept { return 1; }
};

struct Immediate {
    struct State {};
    struct Message {};
    State init(const NodeContext&) const { return {}; }
    void send(const NodeContext&, State&, std::uint64_t, Outbox<Message>&) const {}
    void receive(const NodeContext&, State&, std::uint64_t, std::span<const Incoming<Message>>) const {}
    bool done(const NodeContext&, const State&, std::uint64_t) const { return true; }
    static std::uint64_t bits(const Message&) noexcept { return 1; }
};

struct Forever : Immediate {
    bool done(const NodeContext&, const State&, std::uint64_t) const { return false; }
};

struct WrongAddress : Immediate {
    void send(const NodeContext& ctx, State&, std::uint64_t, Outbox<Message>& out) const {
        if (ctx.id == 0) {
            out.send(2, {});
        }
    }
    bool done(const NodeContext&, const State&, std::uint64_t round) const { return round >= 1; }
};

// Every node sends `width`-bit messages with keyed random content to
// random neighbors; records everything it receives.
struct Gossip {
    struct Message {
        std::uint64_t value;
        std::uint64_t width;
    };
    struct State {
        std::vector<std::pair<NodeId, std::uint64_t>> seen;
    };
    std::uint64_t rounds;
    std::uint64_t width;

    State init(const NodeContext&) const { return {}; }
    void send(const NodeContext& ctx, State&, std::uint64_t round, Outbox<Message>& out) const {
        Rng rng = Rng::keyed(ctx.seed, {round, ctx.id});
        const auto copies = 1 + rng.below(3);
        for (std::uint64_t i = 0; i < copies; ++i) {
            out.send_to_index(rng.below(ctx.degree()), {rng(), width});
        }
    }
    void receive(const NodeContext& ctx, State& s, std::uint64_t, std::span<const Incoming<Message>> inbox) const {
        for (const auto& in : inbox) {
            CHECK(std::find(ctx.neighbors.begin(), ctx.neighbors.end(), in.from) != ctx.neighbors.end());
            s.seen.emplace_back(in.from, in.message.value);
        }
    }
    bool done(const NodeContext&, const State&, std::uint64_t round) const { return round >= rounds; }
    static std::uint64_t bits(const Message& m) noexcept { return m.width; }
};

} // namespace

TEST_CASE("single node that terminates immediately") {
    const auto g = Graph::from_edges(1, {});
    const auto run = run_protocol(g, Immediate{}, SimConfig{});
    CHECK(run.stats.rounds == 0);
    CHECK(run.stats.messages == 0);
}

TEST_CASE("flooding a path takes one round per hop") {
    for (NodeId length : {1u, 2u, 7u, 30u}) {
        const auto g = gen::path(length + 1);
        const auto run = run_protocol(g, Flood{0}, SimConfig{});
        CHECK(run.stats.rounds == length);
        CHECK(run.stats.messages == length);
        CHECK(run.stats.max_node_messages == 1);
        CHECK(run.stats.max_edge_bits == 1);
        for (const auto& s : run.states) {
            CHECK(s.has);
        }
    }
}

TEST_CASE("errors: round cap and non-neighbor addressing") {
    const auto g = gen::path(3);
    SimConfig config;
    config.round_cap = 50;
    CHECK_THROWS_WITH_AS(run_protocol(g, Forever{}, config), doctest::Contains("non-termination"),
                         SimulationError);
    CHECK_THROWS_AS(run_protocol(g, WrongAddress{}, config), SimulationError);
    config.exec = Exec::serial;
    CHECK_THROWS_AS(run_protocol(g, WrongAddress{}, config), SimulationError);
}

TEST_CASE("determinism across execution modes") {
    const auto g = gen::random_connected(500, 1500, 21);
    SimConfig config;
    config.seed = 1234;
    config.exec = Exec::serial;
    const auto a = run_protocol(g, Gossip{12, 3}, config);
    config.exec = Exec::parallel;
    const auto b = run_protocol(g, Gossip{12, 3}, config);
    const auto c = run_protocol(g, Gossip{12, 3}, config);
    CHECK(a.stats == b.stats);
    CHECK(b.stats == c.stats);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        CHECK(a.states[v].seen == b.states[v].seen);
    }
    CHECK(a.stats.messages >= a.stats.max_node_messages);
}

TEST_CASE("strict mode charges overloaded edges") {
    const auto g = gen::random_connected(64, 100, 2);
    SimConfig config;
    config.seed = 8;
    config.bandwidth_bits = 4;
    const auto paper = run_protocol(g, Gossip{10, 3}, config);
    CHECK(paper.stats.rounds == 10);
    config.mode = CongestionMode::strict;
    const auto strict = run_protocol(g, Gossip{10, 3}, config);
    CHECK(strict.stats.rounds >= paper.stats.rounds);
    CHECK(strict.stats.max_edge_bits == paper.stats.max_edge_bits);
    if (paper.stats.max_edge_bits <= 4) {
        CHECK(strict.stats.rounds == paper.stats.rounds);
    } else {
        CHECK(strict.stats.rounds > paper.stats.rounds);
        CHECK(strict.stats.congestion_events > 0);
        CHECK(strict.stats.rounds <= 10 * ((paper.stats.max_edge_bits + 3) / 4));
    }

    // Generous bandwidth: identical round counts.
    config.bandwidth_bits = 1000;
    const auto roomy = run_protocol(g, Gossip{10, 3}, config);
    CHECK(roomy.stats.rounds == 10);
    CHECK(roomy.stats.congestion_events == 0);
}

TEST_CASE("bandwidth default and trace output") {
    SimConfig config;
    CHECK(config.bandwidth(1024) == 20);
    config.beta = 1.0;
    CHECK(config.bandwidth(1000) == 10);
    CHECK(config.bandwidth(1) == 1);

    std::ostringstream trace;
    config.trace = &trace;
    run_protocol(gen::path(3), Flood{0}, config);
    CHECK(trace.str() == "round 1 edge 0 1 bits 1 messages 1\nround 2 edge 1 2 bits 1 messages 1\n");
}

TEST_CASE("round stats compose sequentially") {
    RoundStats a{3, 3, 10, 4, 7, 0, 20};
    RoundStats b{5, 4, 2, 6, 3, 1, 9};
    const auto c = a + b;
    CHECK(c.rounds == 8);
    CHECK(c.logical_rounds == 7);
    CHECK(c.messages == 12);
    CHECK(c.max_node_messages == 6);
    CHECK(c.max_edge_bits == 7);
    CHECK(c.congestion_events == 1);
    CHECK(c.total_bits == 29);
}
