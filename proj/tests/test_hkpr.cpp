#include "hkc/generators.hpp"
#include "hkc/hkpr.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace hkc;

TEST_CASE("exact: t = 0 is the indicator of the seed") {
    const auto g = gen::random_connected(30, 40, 1);
    const auto v = exact_phkpr(g, 7, 0.0, 1e-9);
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0].node == 7);
    CHECK(v.entries[0].value == 1.0);
    CHECK(v.kind == VectorKind::exact);
}

TEST_CASE("exact: single edge at t = ln 2") {
    const auto g = gen::path(2);
    const double t = std::numbers::ln2;
    for (NodeId s : {0u, 1u}) {
        const auto v = exact_phkpr(g, s, t, 1e-12);
        CHECK(v.at(s) == doctest::Approx(0.625).epsilon(1e-11));
        CHECK(v.at(1 - s) == doctest::Approx(0.375).epsilon(1e-11));
    }
}

TEST_CASE("exact: triangle closed form") {
    const auto g = gen::complete(3);
    for (double t : {0.3, 1.0, 4.0}) {
        const auto v = exact_phkpr(g, 0, t, 1e-12);
        const double self = 1.0 / 3.0 + 2.0 / 3.0 * std::exp(-1.5 * t);
        CHECK(std::abs(v.at(0) - self) <= 2e-12);
        CHECK(std::abs(v.at(1) - (1.0 - self) / 2.0) <= 2e-12);
        CHECK(std::abs(v.at(2) - (1.0 - self) / 2.0) <= 2e-12);
    }
}

TEST_CASE("exact: agrees with dense matrix powers and is a distribution") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = static_cast<NodeId>(2 + rng.below(49));
        const auto g = gen::random_connected(n, rng.below(2 * n), rng());
        const auto s = static_cast<NodeId>(rng.below(n));
        const double t = 0.25 + 10.0 * rng.uniform();
        const double tol = 1e-9;
        const auto v = exact_phkpr(g, s, t, tol);
        const auto ref = oracle::dense_phkpr(g, s, t);
        double sum = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            CHECK(std::abs(v.at(u) - ref[u]) <= 2 * tol);
            CHECK(v.at(u) >= 0.0);
            sum += v.at(u);
        }
        CHECK(sum >= 1.0 - tol);
        CHECK(sum <= 1.0 + 1e-12);
    }
}

TEST_CASE("exact: serial and parallel kernels agree bit for bit") {
    const auto g = gen::random_connected(2000, 6000, 8);
    const auto a = exact_phkpr(g, 3, 5.0, 1e-10, Exec::serial);
    const auto b = exact_phkpr(g, 3, 5.0, 1e-10, Exec::parallel);
    CHECK(a == b);
}

TEST_CASE("exact: diffusion on one edge decreases toward 1/2") {
    const auto g = gen::path(2);
    double previous = 1.0;
    for (double t = 0.1; t < 8.0; t += 0.1) {
        const double self = exact_phkpr(g, 0, t, 1e-13).at(0);
        CHECK(self < previous);
        CHECK(self > 0.5);
        previous = self;
    }
}

TEST_CASE("poisson helpers") {
    CHECK(poisson_truncation(0.0, 1e-9) == 0);
    const auto pmf = poisson_pmf(3.0, 5);
    CHECK(pmf[2] == doctest::Approx(std::exp(-3.0) * 4.5));
    CHECK(poisson_tail(3.0, 0) == 1.0);
    CHECK(poisson_tail(3.0, 1) == doctest::Approx(1.0 - std::exp(-3.0)));
    // Large t must not underflow.
    CHECK(poisson_tail(5000.0, 5000) == doctest::Approx(0.5).epsilon(0.02));
    const auto n = poisson_truncation(8.0, 1e-9);
    CHECK(poisson_tail(8.0, n + 1) <= 1e-9);
    CHECK(poisson_tail(8.0, n) > 1e-9);
    const auto truncated = truncated_length_pmf(3.0, 6);
    double total = 0.0;
    for (double p : truncated) {
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("walk length sampler") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_walk_length(0.0, rng) == 0);
    }

    Rng mean_rng(77);
    const int draws = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) {
        sum += static_cast<double>(sample_walk_length(5.0, mean_rng));
    }
    CHECK(std::abs(sum / draws - 5.0) <= 3.0 * std::sqrt(5.0 / draws));

    // Chi-square against Poisson(3): bins 0..11 and >= 12, 12 degrees of
    // freedom, 99.9th percentile 32.9095.
    Rng fit_rng(31337);
    std::vector<double> observed(13, 0.0);
    for (int i = 0; i < draws; ++i) {
        observed[std::min<std::uint64_t>(sample_walk_length(3.0, fit_rng), 12)] += 1.0;
    }
    const auto pmf = poisson_pmf(3.0, 12);
    double chi2 = 0.0;
    for (std::size_t k = 0; k < 13; ++k) {
        const double expected = draws * (k < 12 ? pmf[k] : poisson_tail(3.0, 12));
        chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    CHECK(chi2 < 32.9095);

    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_walk_length(45.0, a) == sample_walk_length(45.0, b));
    }
}

TEST_CASE("walk parameters") {
    CHECK(token_count(1024, 0.5) == 888);
    CHECK_THROWS_AS(walk_parameters(1024, 0.5), std::invalid_argument);
    CHECK(walk_parameters(1000, 0.1).step_cap == 6);
    CHECK(walk_parameters(1000, 0.4).step_cap == 2);
    CHECK(walk_parameters(34, 0.1).tokens == 56422);
    CHECK(walk_parameters(1000, 0.1, 2.0).step_cap == 12);
    CHECK_THROWS_AS(walk_parameters(1000, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(walk_parameters(1000, 0.0), std::invalid_argument);
    CHECK(walk_parameters(1, 0.1).tokens == 1);
}

TEST_CASE("serial estimator: degenerate and conservation") {
    const auto g = gen::karate_club();
    const auto zero = serial_estimate_phkpr(g, 4, 0.0, 0.2, 9);
    REQUIRE(zero.entries.size() == 1);
    CHECK(zero.entries[0].node == 4);
    CHECK(zero.entries[0].value == 1.0);

    const auto est = serial_estimate_phkpr(g, 0, 3.0, 0.2, 10);
    const auto params = walk_parameters(g.node_count(), 0.2);
    CHECK(est.count_sum() == params.tokens);
    CHECK(est.tokens == params.tokens);
    CHECK(est.support_size() <= params.tokens);
    const auto dist = g.bfs_distances(0);
    for (const auto& e : est.entries) {
        CHECK(dist[e.node] <= params.step_cap);
        CHECK(e.value == static_cast<double>(e.count) / static_cast<double>(est.tokens));
    }
}

TEST_CASE("serial estimator: serial and parallel paths agree") {
    const auto g = gen::random_connected(300, 900, 4);
    CHECK(serial_estimate_phkpr(g, 1, 4.0, 0.2, 77, 1.0, Exec::serial) ==
          serial_estimate_phkpr(g, 1, 4.0, 0.2, 77, 1.0, Exec::parallel));
}

TEST_CASE("serial estimator: unbiased for the truncated walk distribution") {
    const auto g = gen::random_connected(20, 25, 12);
    const double t = 2.5;
    const double eps = 0.2;
    const auto params = walk_parameters(g.node_count(), eps);
    const auto truth = oracle::dense_truncated_phkpr(g, 0, t, params.step_cap);
    std::vector<double> mean(g.node_count(), 0.0);
    const int runs = 40;
    for (int i = 0; i < runs; ++i) {
        const auto est = serial_estimate_phkpr(g, 0, t, eps, 1000 + i);
        for (const auto& e : est.entries) {
            mean[e.node] += e.value / runs;
        }
    }
    const double total_tokens = static_cast<double>(params.tokens) * runs;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const double sd = std::sqrt(truth[v] * (1 - truth[v]) / total_tokens);
        CHECK(std::abs(mean[v] - truth[v]) <= 5 * sd + 1e-12);
    }
}

TEST_CASE("approximation check clauses") {
    const std::vector<double> exact{0.5, 0.3, 0.15, 0.05};
    auto make = [](std::vector<double> values) { return PhkprVector::from_dense(0, 1.0, values); };
    CHECK(check_approximation(make({0.5, 0.3, 0.15, 0.05}), exact, 0.1).ok());
    // Zero where rho <= eps is allowed.
    CHECK(check_approximation(make({0.5, 0.3, 0.15, 0.0}), exact, 0.1).ok());
    // Zero where rho > eps is not.
    const auto missing = check_approximation(make({0.5, 0.3, 0.0, 0.05}), exact, 0.1);
    CHECK_FALSE(missing.zeros_ok);
    // Upper clause has no additive slack.
    const auto high = check_approximation(make({0.5, 0.3, 0.15, 0.056}), exact, 0.1);
    CHECK_FALSE(high.bounds_ok);
    CHECK(high.worst_node == 3);
}
