#include "hkc/phkpr_dist.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hkc {

namespace {

constexpr std::uint64_t kLengthDrawKey = 0x6c656e67ULL;

std::uint64_t binomial(std::uint64_t trials, double p, Rng& rng) {
    if (trials == 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return trials;
    }
    std::binomial_distribution<std::uint64_t> dist(trials, p);
    return std::min(dist(rng), trials);
}

} // namespace

PhkprProtocol::PhkprProtocol(NodeId seed, double t, WalkParameters params)
    : seed_(seed), t_(t), params_(params), length_pmf_(truncated_length_pmf(t, params.step_cap)) {}

PhkprProtocol::State PhkprProtocol::init(const NodeContext& ctx) const {
    State state;
    state.held.assign(params_.step_cap + 1, 0);
    if (ctx.id != seed_) {
        return state;
    }
    state.visited = true;
    // Multinomial(r; pmf) by sequential conditional binomials.
    Rng rng = Rng::keyed(ctx.seed, {kLengthDrawKey, ctx.id});
    std::vector<double> mass_from(length_pmf_.size() + 1, 0.0);
    for (std::size_t k = length_pmf_.size(); k-- > 0;) {
        mass_from[k] = mass_from[k + 1] + length_pmf_[k];
    }
    std::uint64_t left = params_.tokens;
    for (std::uint32_t k = 0; k < params_.step_cap && left > 0; ++k) {
        const double p = mass_from[k] > 0.0 ? length_pmf_[k] / mass_from[k] : 1.0;
        const auto drawn = binomial(left, p, rng);
        state.held[k] = drawn;
        left -= drawn;
    }
    state.held[params_.step_cap] += left;
    return state;
}

void PhkprProtocol::send(const NodeContext& ctx, State& state, std::uint64_t round, Outbox<Message>& out) const {
    const std::uint32_t degree = ctx.degree();
    if (degree == 0) {
        return;
    }
    for (std::uint32_t steps = 1; steps <= params_.step_cap; ++steps) {
        std::uint64_t left = state.held[steps];
        if (left == 0) {
            continue;
        }
        state.held[steps] = 0;
        Rng rng = Rng::keyed(ctx.seed, {round, ctx.id, steps});
        for (std::uint32_t i = 0; i < degree && left > 0; ++i) {
            const auto share = i + 1 == degree ? left : binomial(left, 1.0 / (degree - i), rng);
            if (share > 0) {
                out.send_to_index(i, TokenBatch{steps - 1, share});
                left -= share;
            }
        }
    }
}

void PhkprProtocol::receive(const NodeContext&, State& state, std::uint64_t,
                            std::span<const Incoming<Message>> inbox) const {
    for (const auto& in : inbox) {
        state.held[in.message.remaining_steps] += in.message.count;
        state.visited = true;
    }
}

bool PhkprProtocol::done(const NodeContext&, const State&, std::uint64_t round) const {
    return round >= params_.step_cap;
}

DistributedEstimate estimate_phkpr_distributed(const Graph& g, NodeId seed, double t, double eps, double c,
                                               const SimConfig& config,
                                               const RoundObserver<PhkprProtocol::State>& observer) {
    if (seed >= g.node_count()) {
        throw std::out_of_range("seed node " + std::to_string(seed) + " is not in the graph");
    }
    const auto params = walk_parameters(g.node_count(), eps, c);
    const PhkprProtocol protocol(seed, t, params);
    auto run = run_protocol(g, protocol, config, observer);

    std::vector<std::uint64_t> counts(g.node_count(), 0);
    std::vector<NodeId> visited;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto& held = run.states[v].held;
        for (auto h : held) {
            counts[v] += h;
        }
        if (run.states[v].visited) {
            visited.push_back(v);
        }
    }
    return DistributedEstimate{PhkprVector::from_counts(seed, t, counts, params.tokens), run.stats, params,
                               std::move(visited)};
}

EquivalenceReport distribution_equivalence_check(const Graph& g, NodeId seed, double t, double eps,
                                                 std::size_t trials, std::uint64_t base_seed, double c) {
    const NodeId n = g.node_count();
    EquivalenceReport report;
    report.trials = trials;
    report.exact = exact_phkpr(g, seed, t, 1e-12).dense(n);
    report.serial_mean.assign(n, 0.0);
    report.distributed_mean.assign(n, 0.0);
    for (std::size_t i = 0; i < trials; ++i) {
        const std::uint64_t trial_seed = mix64(base_seed ^ mix64(i + 1));
        const auto serial = serial_estimate_phkpr(g, seed, t, eps, trial_seed, c);
        SimConfig config;
        config.seed = trial_seed;
        const auto dist = estimate_phkpr_distributed(g, seed, t, eps, c, config);
        for (const auto& e : serial.entries) {
            report.serial_mean[e.node] += e.value;
        }
        for (const auto& e : dist.vector.entries) {
            report.distributed_mean[e.node] += e.value;
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        report.serial_mean[v] /= static_cast<double>(trials);
        report.distributed_mean[v] /= static_cast<double>(trials);
        report.serial_max_deviation =
            std::max(report.serial_max_deviation, std::abs(report.serial_mean[v] - report.exact[v]));
        report.distributed_max_deviation =
            std::max(report.distributed_max_deviation, std::abs(report.distributed_mean[v] - report.exact[v]));
    }
    return report;
}

} // namespace hkc
