#include "hkc/kmachine.hpp"

#include "hkc/hkpr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hkc {

namespace {

double walk_shape(double eps) {
    const double lnln = std::log(std::log(1.0 / eps));
    return std::log(1.0 / eps) / (lnln > 0.0 ? lnln : 1.0);
}

std::uint64_t window(double eps) { return static_cast<std::uint64_t>(std::ceil(1.0 / eps)); }

} // namespace

CostMeasurement CostMeasurement::from_stats(const RoundStats& stats, const Graph& g) {
    return {stats.messages, stats.max_node_messages, stats.rounds, g.node_count(), g.max_degree()};
}

const char* to_string(DominantTerm term) noexcept {
    switch (term) {
    case DominantTerm::messages:
        return "messages";
    case DominantTerm::rounds:
        return "rounds";
    case DominantTerm::tie:
        return "tie";
    }
    return "?";
}

BoundRow kmachine_breakdown(const CostMeasurement& meas, std::uint64_t k) {
    if (k < 2) {
        throw std::invalid_argument("k-machine bound needs k >= 2");
    }
    if (meas.communication > meas.messages) {
        throw std::invalid_argument("communication degree exceeds message count");
    }
    const double kd = static_cast<double>(k);
    BoundRow row;
    row.k = k;
    row.message_term = static_cast<double>(meas.messages) / (kd * kd);
    row.round_term = static_cast<double>(meas.rounds) * static_cast<double>(meas.communication) / kd;
    row.bound = row.message_term + row.round_term;
    row.dominant = row.message_term > row.round_term   ? DominantTerm::messages
                   : row.message_term < row.round_term ? DominantTerm::rounds
                                                       : DominantTerm::tie;
    return row;
}

double kmachine_round_bound(const CostMeasurement& meas, std::uint64_t k) { return kmachine_breakdown(meas, k).bound; }

std::vector<BoundRow> kmachine_table(const CostMeasurement& meas, std::span<const std::uint64_t> ks) {
    std::vector<BoundRow> rows;
    rows.reserve(ks.size());
    for (auto k : ks) {
        rows.push_back(kmachine_breakdown(meas, k));
    }
    return rows;
}

CostMeasurement phkpr_symbolic(NodeId n, double eps, double c) {
    const auto p = walk_parameters(n, eps, c);
    return {p.tokens * p.step_cap, p.tokens, p.step_cap, n, 0};
}

CostMeasurement local_cluster_symbolic(NodeId n, std::uint32_t max_degree, double eps, double c) {
    const auto p = walk_parameters(n, eps, c);
    return {p.tokens * p.step_cap + window(eps), std::max<std::uint64_t>(p.tokens, max_degree),
            p.step_cap + window(eps), n, max_degree};
}

double phkpr_closed_form(double eps, std::uint64_t k) {
    const double kd = static_cast<double>(k);
    return walk_shape(eps) / (eps * eps * eps * kd) * (1.0 / kd + 1.0);
}

double local_cluster_closed_form(double eps, std::uint32_t max_degree, std::uint64_t k) {
    const double kd = static_cast<double>(k);
    const double l = walk_shape(eps);
    const double cube = 1.0 / (eps * eps * eps);
    return l * cube / (kd * kd) + 1.0 / (eps * kd * kd) +
           (l / kd + 1.0 / (kd * eps)) * std::max(cube, static_cast<double>(max_degree));
}

double dropped_polylog_factor(NodeId n, double eps, double c) {
    const auto p = walk_parameters(n, eps, c);
    return static_cast<double>(p.tokens) * eps * eps * eps * static_cast<double>(p.step_cap) / walk_shape(eps);
}

} // namespace hkc
