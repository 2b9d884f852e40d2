#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hkc {

struct CliEnvironment {
    std::optional<std::string> round_cap;  // HKC_ROUND_CAP

    static CliEnvironment from_process();
};

// Exit codes of run_cli.
inline constexpr int exit_ok = 0;
inline constexpr int exit_graph_error = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_simulation_error = 3;

// `args` excludes the program name. Writes the report to `out` and
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = CliEnvironment::from_process());

} // namespace hkc
