#pragma once

// Golden-file harness shared by test_golden and the acceptance suite.

#include "hkc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkc::golden {

struct Case {
    std::string name;
    std::vector<std::string> args;
};

struct Outcome {
    std::string name;
    bool repeatable = false;  // two runs gave identical bytes
    bool matches = false;     // output equals the stored golden file
    std::string detail;
};

inline std::filesystem::path directory() { return std::filesystem::path(HKC_SOURCE_DIR) / "tests" / "golden"; }

inline std::vector<Case> load_cases() {
    std::ifstream in(directory() / "cases.txt");
    if (!in) {
        throw std::runtime_error("cannot read golden cases");
    }
    std::vector<Case> cases;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto colon = line.find(':');
        Case c{line.substr(0, colon), {}};
        std::istringstream words(line.substr(colon + 1));
        for (std::string w; words >> w;) {
            c.args.push_back(w);
        }
        cases.push_back(std::move(c));
    }
    return cases;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Set HKC_UPDATE_GOLDEN=1 to rewrite the stored reports instead of comparing.
inline Outcome check(const Case& c) {
    std::filesystem::current_path(HKC_SOURCE_DIR);
    Outcome o{c.name};
    std::string first, second;
    for (auto* out : {&first, &second}) {
        std::ostringstream report, err;
        const int code = run_cli(c.args, report, err, CliEnvironment{});
        if (code != exit_ok) {
            o.detail = "exit " + std::to_string(code) + ": " + err.str();
            return o;
        }
        *out = report.str();
    }
    o.repeatable = first == second;
    const auto path = directory() / (c.name + ".txt");
    if (const char* update = std::getenv("HKC_UPDATE_GOLDEN"); update && std::string(update) == "1") {
        std::ofstream(path, std::ios::binary) << first;
    }
    o.matches = std::filesystem::exists(path) && read_file(path) == first;
    if (!o.matches) {
        o.detail = "differs from " + path.filename().string();
    }
    return o;
}

} // namespace hkc::golden
