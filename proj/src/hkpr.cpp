#include "hkc/hkpr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hkc {

const char* to_string(VectorKind kind) noexcept {
    return kind == VectorKind::exact ? "exact" : "estimated";
}

PhkprVector PhkprVector::from_dense(NodeId seed, double t, std::span<const double> values) {
    PhkprVector out{seed, t, VectorKind::exact, 0, {}};
    for (std::size_t v = 0; v < values.size(); ++v) {
        if (values[v] > 0.0) {
            out.entries.push_back({static_cast<NodeId>(v), values[v], 0});
        }
    }
    return out;
}

PhkprVector PhkprVector::from_counts(NodeId seed, double t, std::span<const std::uint64_t> counts,
                                     std::uint64_t tokens) {
    PhkprVector out{seed, t, VectorKind::estimated, tokens, {}};
    for (std::size_t v = 0; v < counts.size(); ++v) {
        if (counts[v] > 0) {
            out.entries.push_back(
                {static_cast<NodeId>(v), static_cast<double>(counts[v]) / static_cast<double>(tokens), counts[v]});
        }
    }
    return out;
}

double PhkprVector::at(NodeId v) const noexcept {
    const auto it = std::lower_bound(entries.begin(), entries.end(), v,
                                     [](const PhkprEntry& e, NodeId node) { return e.node < node; });
    return it != entries.end() && it->node == v ? it->value : 0.0;
}

double PhkprVector::sum() const noexcept {
    double s = 0.0;
    for (const auto& e : entries) {
        s += e.value;
    }
    return s;
}

std::uint64_t PhkprVector::count_sum() const noexcept {
    std::uint64_t s = 0;
    for (const auto& e : entries) {
        s += e.count;
    }
    return s;
}

std::vector<double> PhkprVector::dense(NodeId n) const {
    std::vector<double> out(n, 0.0);
    for (const auto& e : entries) {
        out.at(e.node) = e.value;
    }
    return out;
}

namespace {

double log_pmf(double t, std::size_t k) {
    return -t + static_cast<double>(k) * std::log(t) - std::lgamma(static_cast<double>(k) + 1.0);
}

// Past this index the Poisson(t) mass is far below double precision.
std::size_t negligible_index(double t) {
    return static_cast<std::size_t>(std::ceil(t + 50.0 * std::sqrt(t) + 100.0));
}

// suffix[k] = P[X >= k] for k in [0, limit]; suffix[limit] = 0.
std::vector<double> poisson_suffix(double t, std::size_t limit) {
    const auto pmf = poisson_pmf(t, limit);
    std::vector<double> suffix(limit + 1, 0.0);
    for (std::size_t k = limit; k-- > 0;) {
        suffix[k] = suffix[k + 1] + pmf[k];
    }
    return suffix;
}

} // namespace

std::vector<double> poisson_pmf(double t, std::size_t count) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("diffusion time must be finite and nonnegative");
    }
    std::vector<double> pmf(count, 0.0);
    if (count == 0) {
        return pmf;
    }
    if (t == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    for (std::size_t k = 0; k < count; ++k) {
        pmf[k] = std::exp(log_pmf(t, k));
    }
    return pmf;
}

double poisson_tail(double t, std::size_t k) {
    if (k == 0) {
        return 1.0;
    }
    const auto limit = std::max(negligible_index(t), k + 1);
    return std::min(1.0, poisson_suffix(t, limit)[k]);
}

std::vector<double> truncated_length_pmf(double t, std::uint32_t cap) {
    auto pmf = poisson_pmf(t, cap + 1);
    pmf[cap] = poisson_tail(t, cap);
    return pmf;
}

std::size_t poisson_truncation(double t, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("truncation tolerance must be positive");
    }
    const auto limit = negligible_index(t);
    const auto suffix = poisson_suffix(t, limit);
    for (std::size_t n = 0; n < limit; ++n) {
        if (suffix[n + 1] <= tol) {
            return n;
        }
    }
    return limit;
}

std::uint64_t token_count(std::uint64_t n, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("eps must lie in (0, 1)");
    }
    if (n == 0) {
        throw std::invalid_argument("graph size must be positive");
    }
    const double tokens = std::ceil(16.0 / (eps * eps * eps) * std::log(static_cast<double>(n)));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(tokens));
}

WalkParameters walk_parameters(std::uint64_t n, double eps, double c) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("eps must lie in (0, 1/2)");
    }
    if (!(c >= 1.0)) {
        throw std::invalid_argument("step-cap constant c must be >= 1");
    }
    const double log_inv = std::log(1.0 / eps);
    const double loglog = std::log(log_inv);
    const double denom = loglog > 0.0 ? loglog : 1.0;
    const double cap = std::ceil(c * 2.0 * log_inv / denom);
    return WalkParameters{token_count(n, eps), std::max<std::uint32_t>(1, static_cast<std::uint32_t>(cap))};
}

PhkprVector exact_phkpr(const Graph& g, NodeId seed, double t, double tol, Exec exec) {
    const NodeId n = g.node_count();
    if (seed >= n) {
        throw std::out_of_range("seed node " + std::to_string(seed) + " is not in the graph");
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::invalid_argument("tolerance must lie in (0, 1)");
    }
    const std::size_t terms = poisson_truncation(t, tol) + 1;
    const auto weight = poisson_pmf(t, terms);

    std::vector<double> walk(n, 0.0), next(n, 0.0), scaled(n, 0.0), acc(n, 0.0);
    walk[seed] = 1.0;
    const bool par = exec == Exec::parallel;
    const auto count = static_cast<std::int64_t>(n);
    for (std::size_t k = 0; k < terms; ++k) {
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t v = 0; v < count; ++v) {
            acc[v] += weight[k] * walk[v];
            scaled[v] = walk[v] / g.degree(static_cast<NodeId>(v));
        }
        if (k + 1 == terms) {
            break;
        }
        // (x P)(v) = sum over neighbors u of x(u) / d_u
#pragma omp parallel for schedule(dynamic, 256) if (par)
        for (std::int64_t v = 0; v < count; ++v) {
            double s = 0.0;
            for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
                s += scaled[u];
            }
            next[v] = s;
        }
        walk.swap(next);
    }
    return PhkprVector::from_dense(seed, t, acc);
}

std::uint64_t sample_walk_length(double t, Rng& rng) {
    if (t < 0.0 || !std::isfinite(t)) {
        throw std::invalid_argument("diffusion time must be finite and nonnegative");
    }
    if (t == 0.0) {
        return 0;
    }
    if (t > 30.0) {
        std::poisson_distribution<std::uint64_t> dist(t);
        return dist(rng);
    }
    const double u = rng.uniform();
    std::uint64_t k = 0;
    double p = std::exp(-t);
    double cdf = p;
    while (u >= cdf && p > 0.0) {
        ++k;
        p *= t / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

PhkprVector serial_estimate_phkpr(const Graph& g, NodeId seed, double t, double eps, std::uint64_t rng_seed,
                                  double c, Exec exec) {
    const NodeId n = g.node_count();
    if (seed >= n) {
        throw std::out_of_range("seed node " + std::to_string(seed) + " is not in the graph");
    }
    const auto params = walk_parameters(n, eps, c);
    const auto tokens = static_cast<std::int64_t>(params.tokens);
    std::vector<std::uint64_t> counts(n, 0);

    auto walk = [&](std::int64_t token) {
        Rng rng = Rng::keyed(rng_seed, {static_cast<std::uint64_t>(token)});
        const auto steps = std::min<std::uint64_t>(sample_walk_length(t, rng), params.step_cap);
        NodeId at = seed;
        for (std::uint64_t i = 0; i < steps; ++i) {
            const auto nb = g.neighbors(at);
            at = nb[rng.below(nb.size())];
        }
        return at;
    };

    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < tokens; ++i) {
            ++counts[walk(i)];
        }
    } else {
#pragma omp parallel
        {
            std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static) nowait
            for (std::int64_t i = 0; i < tokens; ++i) {
                ++local[walk(i)];
            }
#pragma omp critical(hkc_estimate_merge)
            for (NodeId v = 0; v < n; ++v) {
                counts[v] += local[v];
            }
        }
    }
    return PhkprVector::from_counts(seed, t, counts, params.tokens);
}

ApproximationCheck check_approximation(const PhkprVector& estimate, std::span<const double> exact, double eps) {
    ApproximationCheck result;
    for (std::size_t v = 0; v < exact.size(); ++v) {
        const double rho = exact[v];
        const double est = estimate.at(static_cast<NodeId>(v));
        double excess = 0.0;
        const double low = (1.0 - eps) * rho - eps;
        const double high = (1.0 + eps) * rho;
        if (est < low || est > high) {
            result.bounds_ok = false;
            excess = est < low ? low - est : est - high;
        }
        if (est == 0.0 && rho > eps) {
            result.zeros_ok = false;
            excess = std::max(excess, rho - eps);
        }
        if (excess > 0.0) {
            ++result.violations;
            if (excess > result.worst_excess) {
                result.worst_excess = excess;
                result.worst_node = static_cast<NodeId>(v);
            }
        }
    }
    return result;
}

} // namespace hkc
