#include "hkc/congest.hpp"

#include <cmath>
#include <ostream>

namespace hkc {

const char* to_string(CongestionMode mode) noexcept {
    return mode == CongestionMode::paper ? "paper" : "strict";
}

std::uint64_t SimConfig::bandwidth(NodeId n) const {
    if (bandwidth_bits > 0) {
        return bandwidth_bits;
    }
    const double bits = std::ceil(beta * std::log2(static_cast<double>(std::max<NodeId>(n, 1))));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(bits));
}

RoundStats& RoundStats::operator+=(const RoundStats& other) noexcept {
    rounds += other.rounds;
    logical_rounds += other.logical_rounds;
    messages += other.messages;
    max_node_messages = std::max(max_node_messages, other.max_node_messages);
    max_edge_bits = std::max(max_edge_bits, other.max_edge_bits);
    congestion_events += other.congestion_events;
    total_bits += other.total_bits;
    return *this;
}

namespace detail {

void write_trace_line(std::ostream& out, std::uint64_t round, NodeId from, NodeId to, std::uint64_t bits,
                      std::uint64_t messages) {
    out << "round " << round << " edge " << from << ' ' << to << " bits " << bits << " messages " << messages
        << '\n';
}

} // namespace detail
} // namespace hkc
