#pragma once

#include "hkc/congest.hpp"
#include "hkc/graph.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hkc {

// CONGEST complexities fed to the conversion bound.
struct CostMeasurement {
    std::uint64_t messages = 0;       // M
    std::uint64_t communication = 0;  // C
    std::uint64_t rounds = 0;         // T
    NodeId n = 0;
    std::uint32_t max_degree = 0;     // Delta

    static CostMeasurement from_stats(const RoundStats& stats, const Graph& g);
};

enum class DominantTerm { messages, rounds, tie };

const char* to_string(DominantTerm term) noexcept;

struct BoundRow {
    std::uint64_t k = 0;
    double message_term = 0.0;  // M / k^2
    double round_term = 0.0;    // T C / k
    double bound = 0.0;
    DominantTerm dominant = DominantTerm::tie;
};

// M / k^2 + T C / k with polylog factors omitted. Throws std::invalid_argument
// for k < 2 or C > M.
double kmachine_round_bound(const CostMeasurement& meas, std::uint64_t k);

BoundRow kmachine_breakdown(const CostMeasurement& meas, std::uint64_t k);
std::vector<BoundRow> kmachine_table(const CostMeasurement& meas, std::span<const std::uint64_t> ks);

// Worst-case complexities from the walk parameters:
//   PHKPR:         M = r K,            C = r,              T = K
//   local cluster: M = r K + ceil(1/eps), C = max(r, Delta), T = K + ceil(1/eps)
CostMeasurement phkpr_symbolic(NodeId n, double eps, double c = 1.0);
CostMeasurement local_cluster_symbolic(NodeId n, std::uint32_t max_degree, double eps, double c = 1.0);

// Published closed-form k-machine round bounds, with
// L = ln(1/eps) / lnln(1/eps) (denominator 1 when lnln(1/eps) <= 0):
//   PHKPR:         L / (eps^3 k) (1/k + 1)
//   local cluster: L / (eps^3 k^2) + 1 / (eps k^2) + (L/k + 1/(eps k)) max(1/eps^3, Delta)
double phkpr_closed_form(double eps, std::uint64_t k);
double local_cluster_closed_form(double eps, std::uint32_t max_degree, std::uint64_t k);

// r eps^3 K / L: how far the symbolic substitution may exceed the closed
// forms. The ln n inside r is the dropped polylog factor; the rest
// comes from ceilings and the constants 16 and 2c.
double dropped_polylog_factor(NodeId n, double eps, double c = 1.0);

} // namespace hkc
