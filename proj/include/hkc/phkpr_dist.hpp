#pragma once

#include "hkc/congest.hpp"
#include "hkc/hkpr.hpp"

#include <cstdint>
#include <vector>

namespace hkc {

// Identical tokens crossing one edge in one round, sent as one message.
struct TokenBatch {
    std::uint32_t remaining_steps = 0;
    std::uint64_t count = 0;
};

/**
 * Heat kernel random walks as a CONGEST protocol.
 *
 * The seed draws the truncated walk lengths of all r tokens up front, as a
 * multinomial histogram over {0, .., K}. In round j every node forwards each
 * batch with remaining steps > 0, splitting it multinomially over its
 * neighbors; tokens with no steps left stay put. Every node stops after K
 * rounds, at which point all tokens are at their walk end points.
 */
class PhkprProtocol {
public:
    struct State {
        // held[k]: tokens at this node with k steps left; held[0] are retired.
        std::vector<std::uint64_t> held;
        // Whether any token has ever been at this node.
        bool visited = false;
    };
    using Message = TokenBatch;

    PhkprProtocol(NodeId seed, double t, WalkParameters params);

    State init(const NodeContext& ctx) const;
    void send(const NodeContext& ctx, State& state, std::uint64_t round, Outbox<Message>& out) const;
    void receive(const NodeContext& ctx, State& state, std::uint64_t round,
                 std::span<const Incoming<Message>> inbox) const;
    bool done(const NodeContext& ctx, const State& state, std::uint64_t round) const;

    static std::uint64_t bits(const Message& m) noexcept {
        return bit_width_of(m.remaining_steps) + bit_width_of(m.count);
    }

    const WalkParameters& parameters() const noexcept { return params_; }

private:
    NodeId seed_;
    double t_;
    WalkParameters params_;
    std::vector<double> length_pmf_;
};

struct DistributedEstimate {
    PhkprVector vector;
    RoundStats stats;
    WalkParameters params;
    // Nodes that held a token at some point, sorted.
    std::vector<NodeId> visited;
};

DistributedEstimate estimate_phkpr_distributed(const Graph& g, NodeId seed, double t, double eps, double c,
                                               const SimConfig& config,
                                               const RoundObserver<PhkprProtocol::State>& observer = {});

struct EquivalenceReport {
    std::vector<double> exact;
    std::vector<double> serial_mean;
    std::vector<double> distributed_mean;
    double serial_max_deviation = 0.0;
    double distributed_max_deviation = 0.0;
    std::size_t trials = 0;
};

// Runs both estimators `trials` times (trial i uses seed mix of base_seed
// and i) and compares per-node means against the exact oracle.
EquivalenceReport distribution_equivalence_check(const Graph& g, NodeId seed, double t, double eps,
                                                 std::size_t trials, std::uint64_t base_seed, double c = 1.0);

} // namespace hkc
