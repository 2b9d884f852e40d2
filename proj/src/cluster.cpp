#include "hkc/cluster.hpp"

#include "hkc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hkc {

void validate(const ClusterRequest& req, NodeId n) {
    if (req.seed >= n) {
        throw std::invalid_argument("seed node " + std::to_string(req.seed) + " is not in the graph");
    }
    if (req.sigma == 0 || req.varsigma == 0) {
        throw std::invalid_argument("sigma and varsigma must be positive");
    }
    if (!(req.phi > 0.0 && req.phi <= 1.0)) {
        throw std::invalid_argument("phi must lie in (0, 1]");
    }
    if (!(req.eps > 0.0 && req.eps < 0.5)) {
        throw std::invalid_argument("eps must lie in (0, 1/2)");
    }
    if (!(req.c >= 1.0)) {
        throw std::invalid_argument("c must be at least 1");
    }
    if (!(req.c2 > 0.0)) {
        throw std::invalid_argument("c2 must be positive");
    }
    if (req.t && !(*req.t >= 0.0 && std::isfinite(*req.t))) {
        throw std::invalid_argument("t must be finite and nonnegative");
    }
}

double diffusion_time(double phi, std::uint64_t varsigma, double eps) {
    const double t = std::log(2.0 * std::sqrt(static_cast<double>(varsigma)) / eps) / phi;
    return std::clamp(t, 1.0, 1e4);
}

const char* to_string(SweepStrategy strategy) noexcept {
    return strategy == SweepStrategy::chain ? "chain" : "two-phase";
}

SweepStrategy choose_strategy(std::uint64_t sigma, double eps) {
    const SweepOptions options{.eps = eps};
    return sigma < options.truncation() ? SweepStrategy::chain : SweepStrategy::two_phase;
}

ClusterResult local_cluster(const Graph& g, const ClusterRequest& req, const SimConfig& config) {
    validate(req, g.node_count());
    ClusterResult out;
    out.phi = req.phi;
    out.t = req.t ? *req.t : diffusion_time(req.phi, req.varsigma, req.eps);
    out.strategy = choose_strategy(req.sigma, req.eps);

    const auto est = estimate_phkpr_distributed(g, req.seed, out.t, req.eps, req.c, config);
    out.params = est.params;
    out.phkpr = est.stats;

    const SweepOptions options{.eps = req.eps, .c = req.c};
    const auto sweep = out.strategy == SweepStrategy::chain
                           ? chain_sweep(g, est.vector, SweepCaps{req.sigma, req.varsigma}, options, config)
                           : distributed_sweep(g, est.vector, options, config);
    out.sweep = sweep.result;
    out.sweep_stats = sweep.stats;
    out.cost = sweep.cost;
    out.stats = out.phkpr + out.sweep_stats;
    return out;
}

std::size_t max_phi_guesses(const Graph& g) {
    const std::uint64_t vol = g.total_volume();
    return vol <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(vol - 1));
}

AutoPhiResult local_cluster_autophi(const Graph& g, const ClusterRequest& req, const SimConfig& config) {
    AutoPhiResult out;
    const double floor = 1.0 / static_cast<double>(std::max<std::uint64_t>(g.total_volume(), 1));
    bool have_best = false;
    for (double phi = 0.5; phi >= floor || out.guesses == 0; phi /= 2) {
        ClusterRequest guess = req;
        guess.phi = phi;
        guess.t.reset();
        auto run = local_cluster(g, guess, config);
        ++out.guesses;
        out.tried.push_back(phi);
        out.stats += run.stats;
        const bool accept = run.sweep.best_ratio.value() <= req.c2 * std::sqrt(phi);
        if (accept || !have_best || run.sweep.best_ratio < out.best.sweep.best_ratio) {
            out.best = std::move(run);
            have_best = true;
        }
        if (accept) {
            out.accepted = true;
            break;
        }
    }
    return out;
}

SparseCutResult sparse_cut(const Graph& g, std::size_t sample_count, const ClusterRequest& req,
                           const SimConfig& config, std::uint64_t sample_seed) {
    if (sample_count == 0) {
        throw std::invalid_argument("sample_count must be at least 1");
    }
    const NodeId n = g.node_count();
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    const std::size_t k = std::min<std::size_t>(sample_count, n);
    if (k < n) {
        // Partial Fisher-Yates.
        Rng rng = Rng::keyed(sample_seed, {0x73616d70});
        for (std::size_t i = 0; i < k; ++i) {
            std::swap(pool[i], pool[i + rng.below(n - i)]);
        }
    }
    pool.resize(k);

    // Seeds are independent simulations; the inner engine runs serially so
    // threads go to the outer loop.
    SimConfig inner = config;
    if (config.exec == Exec::parallel) {
        inner.exec = Exec::serial;
    }
    std::vector<AutoPhiResult> runs(k);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (config.exec == Exec::parallel)
    for (std::size_t i = 0; i < k; ++i) {
        try {
            ClusterRequest r = req;
            r.seed = pool[i];
            runs[i] = local_cluster_autophi(g, r, inner);
        } catch (...) {
#pragma omp critical(hkc_sparse_cut)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SparseCutResult out;
    out.seeds = pool;
    std::size_t best = 0;
    for (std::size_t i = 0; i < k; ++i) {
        out.seed_ratios.push_back(runs[i].best.sweep.best_ratio);
        if (runs[i].best.sweep.best_ratio < runs[best].best.sweep.best_ratio) {
            best = i;
        }
    }
    out.best = std::move(runs[best]);
    out.best_seed = pool[best];
    return out;
}

} // namespace hkc
