#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hkc {

// Malformed or invariant-violating input graph. line() is 0 when the
// problem is global (e.g. connectivity) rather than tied to one line.
class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised by the round engine: round cap exceeded, non-neighbor addressing.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hkc
