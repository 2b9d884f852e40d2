#pragma once

#include "hkc/congest.hpp"
#include "hkc/graph.hpp"
#include "hkc/phkpr_dist.hpp"
#include "hkc/sweep.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hkc {

struct ClusterRequest {
    NodeId seed = 0;
    std::uint64_t sigma = 1;     // target size
    std::uint64_t varsigma = 1;  // target volume
    double phi = 0.5;            // optimal Cheeger ratio, in (0, 1]
    double eps = 0.1;            // in (0, 1/2)
    double c = 1.0;              // walk-length constant
    double c2 = 2.0;             // acceptance constant
    std::optional<double> t;     // overrides diffusion_time()
};

// Throws std::invalid_argument on an out-of-range field.
void validate(const ClusterRequest& req, NodeId n);

// t = ln(2 sqrt(varsigma) / eps) / phi, clamped to [1, 1e4].
double diffusion_time(double phi, std::uint64_t varsigma, double eps);

enum class SweepStrategy { two_phase, chain };

const char* to_string(SweepStrategy strategy) noexcept;

// Chain sweep when the size cap lies inside the sweep window ceil(1/eps).
SweepStrategy choose_strategy(std::uint64_t sigma, double eps);

struct ClusterResult {
    SweepResult sweep;
    RoundStats stats;       // PHKPR rounds + sweep rounds
    RoundStats phkpr;
    RoundStats sweep_stats;
    SweepCost cost;
    WalkParameters params;
    SweepStrategy strategy = SweepStrategy::two_phase;
    double t = 0.0;
    double phi = 0.0;
};

ClusterResult local_cluster(const Graph& g, const ClusterRequest& req, const SimConfig& config);

struct AutoPhiResult {
    ClusterResult best;       // accepted run, or the lowest-ratio run if none was accepted
    bool accepted = false;
    std::size_t guesses = 0;
    std::vector<double> tried;  // phi values in order
    RoundStats stats;           // all guesses combined
};

// Upper bound on the number of phi guesses: ceil(log2(2m)).
std::size_t max_phi_guesses(const Graph& g);

// Halves phi from 1/2 while phi >= 1/(2m); accepts the first run whose set
// has ratio <= c2 * sqrt(phi). req.phi and req.t are ignored.
AutoPhiResult local_cluster_autophi(const Graph& g, const ClusterRequest& req, const SimConfig& config);

struct SparseCutResult {
    AutoPhiResult best;
    NodeId best_seed = 0;
    std::vector<NodeId> seeds;        // sampled seeds, in draw order
    std::vector<Ratio> seed_ratios;   // per-seed best ratio
};

// Runs local_cluster_autophi from sample_count seeds drawn uniformly without
// replacement (all nodes when sample_count >= n) and keeps the minimum
// ratio, earliest sample on ties. req.seed is ignored.
SparseCutResult sparse_cut(const Graph& g, std::size_t sample_count, const ClusterRequest& req,
                           const SimConfig& config, std::uint64_t sample_seed);

} // namespace hkc
