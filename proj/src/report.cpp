#include "hkc/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

namespace hkc {

namespace {

constexpr std::string_view source_mark = "  # ";
constexpr std::string_view columns_mark = "columns: ";

bool has_space(std::string_view s) { return s.find_first_of(" \t\r\n") != std::string_view::npos; }

void check_token(std::string_view what, std::string_view s) {
    if (s.empty() || has_space(s) || s.front() == '[' || s.front() == '#') {
        throw std::invalid_argument(fmt::format("report {} '{}' must be a nonempty word", what, s));
    }
}

void check_value(std::string_view s) {
    if (s.find('\n') != std::string_view::npos || s.find(source_mark) != std::string_view::npos ||
        s.starts_with(' ') || s.ends_with(' ')) {
        throw std::invalid_argument(fmt::format("report value '{}' cannot be rendered losslessly", s));
    }
}

std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') {
            ++i;
        }
        const auto start = i;
        while (i < s.size() && s[i] != ' ') {
            ++i;
        }
        if (i > start) {
            words.emplace_back(s.substr(start, i - start));
        }
    }
    return words;
}

} // namespace

std::string format_number(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    // The exponent after rounding to 12 digits, so 9.9999999999999 counts as 10.
    const auto sci = fmt::format("{:.11e}", x);
    const int exponent = std::stoi(sci.substr(sci.find('e') + 1));
    const int decimals = std::max(0, 11 - exponent);
    auto s = fmt::format("{:.{}f}", x, decimals);
    if (s == "-" + fmt::format("{:.{}f}", 0.0, decimals)) {
        s.erase(0, 1);
    }
    return s;
}

ReportSection& ReportSection::field(std::string key, std::string value, std::string source) {
    fields.push_back({std::move(key), std::move(value), std::move(source)});
    return *this;
}

ReportSection& ReportSection::field(std::string key, double value, std::string source) {
    return field(std::move(key), format_number(value), std::move(source));
}

ReportSection& ReportSection::table(std::vector<std::string> cols) {
    columns = std::move(cols);
    return *this;
}

ReportSection& ReportSection::row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
        throw std::invalid_argument(fmt::format("report row in [{}] has {} cells for {} columns", name, cells.size(),
                                                columns.size()));
    }
    rows.push_back(std::move(cells));
    return *this;
}

ReportSection& Report::section(std::string name) {
    sections.push_back(ReportSection{.name = std::move(name)});
    return sections.back();
}

const ReportSection* Report::find(std::string_view name) const {
    for (const auto& s : sections) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

std::string Report::render() const {
    std::string out;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const auto& sec = sections[i];
        check_token("section", sec.name);
        if (i > 0) {
            out += '\n';
        }
        out += fmt::format("[{}]\n", sec.name);
        for (const auto& f : sec.fields) {
            check_token("key", f.key);
            if (f.key == "columns:") {
                throw std::invalid_argument("report key cannot be 'columns:'");
            }
            check_value(f.value);
            if (!f.source.empty()) {
                check_token("source", f.source);
            }
            out += fmt::format("{} = {}", f.key, f.value);
            if (!f.source.empty()) {
                out += fmt::format("{}{}", source_mark, f.source);
            }
            out += '\n';
        }
        if (!sec.columns.empty()) {
            for (const auto& c : sec.columns) {
                check_token("column", c);
            }
            out += fmt::format("{}{}\n", columns_mark, fmt::join(sec.columns, " "));
            for (const auto& r : sec.rows) {
                for (const auto& c : r) {
                    check_token("cell", c);
                }
                out += fmt::format("{}\n", fmt::join(r, " "));
            }
        }
    }
    return out;
}

Report parse_report(std::string_view text) {
    Report report;
    ReportSection* current = nullptr;
    bool in_table = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim_cr(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto fail = [&](std::string_view why) {
            return std::invalid_argument(fmt::format("report line {}: {}", line_no, why));
        };

        if (line.empty()) {
            in_table = false;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw fail("malformed section header");
            }
            current = &report.section(std::string(line.substr(1, line.size() - 2)));
            in_table = false;
            continue;
        }
        if (!current) {
            throw fail("content before the first section");
        }
        if (line.starts_with(columns_mark)) {
            if (!current->columns.empty()) {
                throw fail("second table in one section");
            }
            current->columns = split_words(line.substr(columns_mark.size()));
            if (current->columns.empty()) {
                throw fail("table without columns");
            }
            in_table = true;
            continue;
        }
        if (in_table) {
            auto cells = split_words(line);
            if (cells.size() != current->columns.size()) {
                throw fail("row width does not match columns");
            }
            current->rows.push_back(std::move(cells));
            continue;
        }
        const auto eq = line.find(" = ");
        if (eq == std::string_view::npos) {
            throw fail("expected 'key = value'");
        }
        ReportField f;
        f.key = std::string(line.substr(0, eq));
        auto rest = line.substr(eq + 3);
        if (const auto mark = rest.rfind(source_mark); mark != std::string_view::npos) {
            f.source = std::string(rest.substr(mark + source_mark.size()));
            rest = rest.substr(0, mark);
        }
        f.value = std::string(rest);
        current->fields.push_back(std::move(f));
    }
    return report;
}

} // namespace hkc
