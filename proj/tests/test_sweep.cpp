#include "hkc/generators.hpp"
#include "hkc/phkpr_dist.hpp"
#include "hkc/rng.hpp"
#include "hkc/sweep.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace hkc;

namespace {

// Random estimated vector: counts on a random subset that includes the seed.
PhkprVector random_vector(const Graph& g, NodeId seed, std::uint64_t rng_seed, double density) {
    Rng rng = Rng::keyed(rng_seed, {0x5eed});
    std::vector<std::uint64_t> counts(g.node_count(), 0);
    std::uint64_t tokens = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (v == seed || rng.uniform() < density) {
            // Small range so rank ties occur and exercise the ID tie-break.
            counts[v] = 1 + rng.below(4) * g.degree(v);
            tokens += counts[v];
        }
    }
    return PhkprVector::from_counts(seed, 1.0, counts, tokens);
}

Graph random_graph(std::uint64_t i) {
    Rng rng = Rng::keyed(i, {0x96});
    const NodeId n = 2 + static_cast<NodeId>(rng.below(40));
    return gen::random_connected(n, rng.below(2 * n), i);
}

} // namespace

TEST_CASE("path example: profile and best prefix") {
    // a=0, b=1, c=2, d=3 on a path; degrees 1 2 2 1.
    const auto g = gen::path(4);
    const std::vector<double> values{0.4, 0.5, 0.3, 0.1};
    const auto vec = PhkprVector::from_dense(0, 1.0, values);
    CHECK(sweep_ordering(g, vec) == std::vector<NodeId>{0, 1, 2, 3});
    const auto result = sweep_exact(g, vec);
    REQUIRE(result.profile.size() == 3);
    CHECK(result.profile[0].ratio == Ratio{1, 1});
    CHECK(result.profile[1].ratio == Ratio{1, 3});
    CHECK(result.profile[2].ratio == Ratio{1, 1});
    CHECK(result.best_prefix == 2);
    CHECK(result.best_set == NodeSet{{0, 1}});
    CHECK(result.best_ratio.str() == "1/3");
}

TEST_CASE("single-node support gives conductance 1") {
    const auto g = gen::karate_club();
    const auto vec = PhkprVector::from_dense(4, 0.0, exact_phkpr(g, 4, 0.0, 1e-12).dense(34));
    const auto result = sweep_exact(g, vec);
    CHECK(result.best_prefix == 1);
    CHECK(result.best_ratio == Ratio{1, 1});
    CHECK(result.best_set == NodeSet{{4}});
}

TEST_CASE("ranking ties break by ascending ID") {
    const auto g = gen::cycle(6);
    const std::vector<double> values{0.1, 0.2, 0.2, 0.0, 0.2, 0.1};
    const auto vec = PhkprVector::from_dense(1, 1.0, values);
    CHECK(sweep_ordering(g, vec) == std::vector<NodeId>{1, 2, 4, 0, 5});
}

TEST_CASE("degenerate inputs") {
    const auto g = gen::path(3);
    PhkprVector empty;
    CHECK_THROWS_AS(sweep_exact(g, empty), std::invalid_argument);
    const auto single = gen::complete(1);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(sweep_exact(single, PhkprVector::from_dense(0, 0.0, one)), std::invalid_argument);
    CHECK(evaluable_prefixes(3, 3) == 2);
    CHECK(evaluable_prefixes(3, 4) == 3);
    CHECK(evaluable_prefixes(8, 20, 5) == 5);
}

TEST_CASE("skips S = V when the whole graph is in the support") {
    const auto g = gen::complete(4);
    const std::vector<double> values{0.4, 0.3, 0.2, 0.1};
    const auto result = sweep_exact(g, PhkprVector::from_dense(0, 1.0, values));
    CHECK(result.profile.size() == 3);
    CHECK(result.ordering.size() == 4);
}

TEST_CASE("recursions match a direct edge scan on random graphs") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto g = random_graph(i);
        const auto vec = random_vector(g, static_cast<NodeId>(i % g.node_count()), i, 0.5);
        if (vec.support_size() == g.node_count() && g.node_count() == 1) {
            continue;
        }
        const auto result = sweep_exact(g, vec);
        const auto direct = oracle::direct_prefix_stats(g, result.ordering);
        REQUIRE(result.profile.size() <= direct.size());
        for (std::size_t j = 0; j < result.profile.size(); ++j) {
            CHECK(result.profile[j].volume == direct[j].volume);
            CHECK(result.profile[j].boundary == direct[j].boundary);
            const auto denom = std::min(direct[j].volume, g.total_volume() - direct[j].volume);
            CHECK(result.profile[j].ratio == Ratio{direct[j].boundary, denom});
        }
        CHECK(result.best_ratio == cheeger_ratio(g, result.best_set));
        for (const auto& step : result.profile) {
            CHECK_FALSE(step.ratio < result.best_ratio);
        }
    }
}

TEST_CASE("distributed sweep equals the centralized sweep") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto g = random_graph(1000 + i);
        const NodeId seed = static_cast<NodeId>(i % g.node_count());
        const auto vec = random_vector(g, seed, i, 0.4);
        SweepOptions options;
        options.eps = (i % 2 == 0) ? 0.1 : 0.02;
        options.radius = g.node_count();
        SimConfig config;
        config.seed = i;
        config.exec = (i % 3 == 0) ? Exec::serial : Exec::parallel;
        const auto exact = sweep_exact(g, vec, options.truncation());
        const auto dist = distributed_sweep(g, vec, options, config);
        CHECK(dist.result.ordering == exact.ordering);
        CHECK(dist.result.best_prefix == exact.best_prefix);
        CHECK(dist.result.best_set == exact.best_set);
        CHECK(dist.result.best_ratio == exact.best_ratio);
        CHECK(dist.cost.considered == exact.ordering.size());
        CHECK(dist.cost.delta_upcast.max_node_messages <= std::max<std::uint64_t>(dist.cost.max_tree_degree, 1));
        CHECK(dist.stats.rounds == dist.cost.ball.rounds + dist.cost.tree.rounds + dist.cost.ordering_upcast.rounds +
                                       dist.cost.ordering_flood.rounds + dist.cost.delta_upcast.rounds);
    }
}

TEST_CASE("distributed sweep on the output of the distributed estimator") {
    const auto g = gen::two_cliques_bridge(20);
    SimConfig config;
    config.seed = 8;
    const auto est = estimate_phkpr_distributed(g, 3, 10.0, 0.1, 1.0, config);
    SweepOptions options;
    const auto dist = distributed_sweep(g, est.vector, options, config);
    const auto exact = sweep_exact(g, est.vector, options.truncation());
    CHECK(dist.result.best_set == exact.best_set);
    CHECK(dist.cost.radius == 6);
    CHECK(dist.cost.considered <= 10);
    CHECK(dist.cost.tree_depth <= 2 * dist.cost.radius);
}

TEST_CASE("support outside the radius ball is rejected") {
    const auto g = gen::path(10);
    const std::vector<double> values{0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0.5};
    const auto vec = PhkprVector::from_dense(0, 1.0, values);
    SweepOptions options;
    options.radius = 3;
    CHECK_THROWS_AS(distributed_sweep(g, vec, options, SimConfig{}), std::invalid_argument);
}

TEST_CASE("chain sweep") {
    SUBCASE("size cap 1 evaluates only S_1") {
        const auto g = gen::karate_club();
        const auto vec = exact_phkpr(g, 0, 3.0, 1e-9);
        const auto chain = chain_sweep(g, vec, SweepCaps{1, 0}, SweepOptions{}, SimConfig{});
        CHECK(chain.result.best_prefix == 1);
        CHECK(chain.result.profile.size() == 1);
        CHECK(chain.result.best_set == NodeSet{{sweep_ordering(g, vec).front()}});
    }
    SUBCASE("loose caps reproduce the two-phase sweep") {
        for (std::uint64_t i = 0; i < 60; ++i) {
            const auto g = random_graph(5000 + i);
            const auto vec = random_vector(g, 0, i, 0.5);
            SweepOptions options;
            options.radius = g.node_count();
            SimConfig config;
            config.seed = i;
            const auto chain = chain_sweep(g, vec, SweepCaps{g.node_count(), g.total_volume()}, options, config);
            const auto dist = distributed_sweep(g, vec, options, config);
            CHECK(chain.result.best_set == dist.result.best_set);
            CHECK(chain.result.best_ratio == dist.result.best_ratio);
            CHECK(chain.result.profile.size() == dist.result.profile.size());
        }
    }
    SUBCASE("volume cap on two cliques stops early") {
        const auto g = gen::two_cliques_bridge(20);
        const auto vec = exact_phkpr(g, 2, 10.0, 1e-9);
        SweepOptions options;
        options.eps = 0.02;
        const auto chain = chain_sweep(g, vec, SweepCaps{0, 381}, options, SimConfig{});
        CHECK(chain.result.profile.size() <= 20);
        for (const auto& step : chain.result.profile) {
            CHECK(step.volume <= 381);
        }
        CHECK(chain.result.best_ratio == Ratio{1, 381});
    }
    SUBCASE("both caps zero is an error") {
        const auto g = gen::path(3);
        const auto vec = exact_phkpr(g, 0, 1.0, 1e-9);
        CHECK_THROWS_AS(chain_sweep(g, vec, SweepCaps{}, SweepOptions{}, SimConfig{}), std::invalid_argument);
    }
}
