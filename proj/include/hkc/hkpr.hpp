#pragma once

#include "hkc/exec.hpp"
#include "hkc/graph.hpp"
#include "hkc/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hkc {

enum class VectorKind { exact, estimated };

const char* to_string(VectorKind kind) noexcept;

struct PhkprEntry {
    NodeId node = 0;
    double value = 0.0;
    // Tokens held at expiry; zero for exact vectors.
    std::uint64_t count = 0;

    friend bool operator==(const PhkprEntry&, const PhkprEntry&) = default;
};

/**
 * Sparse personalized heat kernel pagerank vector for one seed.
 *
 * Entries are sorted by node and strictly positive. Estimated vectors also
 * carry the token counts behind each value, with value = count / tokens;
 * sweeps rank those by exact integer comparison.
 */
struct PhkprVector {
    NodeId seed = 0;
    double t = 0.0;
    VectorKind kind = VectorKind::exact;
    std::uint64_t tokens = 0;
    std::vector<PhkprEntry> entries;

    static PhkprVector from_dense(NodeId seed, double t, std::span<const double> values);
    static PhkprVector from_counts(NodeId seed, double t, std::span<const std::uint64_t> counts,
                                   std::uint64_t tokens);

    std::size_t support_size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
    double at(NodeId v) const noexcept;
    double sum() const noexcept;
    std::uint64_t count_sum() const noexcept;
    std::vector<double> dense(NodeId n) const;

    friend bool operator==(const PhkprVector&, const PhkprVector&) = default;
};

// p_k = e^{-t} t^k / k! for k = 0..count-1, computed in log space so large
// t does not underflow e^{-t} prematurely.
std::vector<double> poisson_pmf(double t, std::size_t count);

// P[X >= k] for X ~ Poisson(t), accurate in both tails.
double poisson_tail(double t, std::size_t k);

// Distribution of min(X, cap) for X ~ Poisson(t): entries 0..cap, the last
// holding the whole tail P[X >= cap].
std::vector<double> truncated_length_pmf(double t, std::uint32_t cap);

// Smallest N with P[X > N] <= tol.
std::size_t poisson_truncation(double t, double tol);

struct WalkParameters {
    std::uint64_t tokens = 0;    // r
    std::uint32_t step_cap = 0;  // K
};

// ceil(16/eps^3 * ln n), at least 1. Defined for 0 < eps < 1.
std::uint64_t token_count(std::uint64_t n, double eps);

// r = token_count(n, eps), K = max(1, ceil(c * 2 ln(1/eps) / d)) where
// d = ln ln(1/eps) when positive and 1 otherwise. Requires 0 < eps < 1/2
// and c >= 1. r is at least 1 so a single-node graph still gets a token.
WalkParameters walk_parameters(std::uint64_t n, double eps, double c = 1.0);

// Truncated series sum_{k<=N_t} p_k chi_s P^k with N_t from
// poisson_truncation(t, tol); per-coordinate error is at most tol.
PhkprVector exact_phkpr(const Graph& g, NodeId seed, double t, double tol, Exec exec = Exec::parallel);

// Poisson(t) draw: sequential-search inversion for t <= 30, the standard
// library's large-mean sampler above.
std::uint64_t sample_walk_length(double t, Rng& rng);

// Centralized Monte Carlo estimator: r independent heat kernel walks from
// the seed, each capped at K steps. Token i draws from Rng::keyed(seed, {i}),
// so serial and parallel execution agree exactly.
PhkprVector serial_estimate_phkpr(const Graph& g, NodeId seed, double t, double eps, std::uint64_t rng_seed,
                                  double c = 1.0, Exec exec = Exec::parallel);

struct ApproximationCheck {
    bool bounds_ok = true;  // (1-eps) rho - eps <= est <= (1+eps) rho everywhere
    bool zeros_ok = true;   // est = 0 only where rho <= eps
    std::size_t violations = 0;
    NodeId worst_node = 0;
    double worst_excess = 0.0;

    bool ok() const noexcept { return bounds_ok && zeros_ok; }
};

// Checks the eps-approximate PHKPR definition against a dense exact vector.
ApproximationCheck check_approximation(const PhkprVector& estimate, std::span<const double> exact, double eps);

} // namespace hkc
