#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hkc {

// Fixed notation with 12 significant digits: 1/3 -> 0.333333333333,
// 12.5 -> 12.5000000000. Integers print as written when passed as such.
std::string format_number(double x);

struct ReportField {
    std::string key;
    std::string value;
    std::string source;  // provenance: flag, default, derived, env; may be empty

    friend bool operator==(const ReportField&, const ReportField&) = default;
};

struct ReportSection {
    std::string name;
    std::vector<ReportField> fields;
    std::vector<std::string> columns;  // empty: no table
    std::vector<std::vector<std::string>> rows;

    ReportSection& field(std::string key, std::string value, std::string source = {});
    ReportSection& field(std::string key, double value, std::string source = {});
    ReportSection& table(std::vector<std::string> columns);
    ReportSection& row(std::vector<std::string> cells);

    friend bool operator==(const ReportSection&, const ReportSection&) = default;
};

/**
 * Line-oriented run report:
 *
 *   [section]
 *   key = value  # source
 *   columns: a b
 *   1 2
 *
 * Sections are separated by a blank line. Keys, values and cells are
 * validated on render so that parse_report(render()) is lossless.
 */
struct Report {
    std::vector<ReportSection> sections;

    ReportSection& section(std::string name);
    const ReportSection* find(std::string_view name) const;

    std::string render() const;

    friend bool operator==(const Report&, const Report&) = default;
};

// Throws std::invalid_argument with the offending line number.
Report parse_report(std::string_view text);

} // namespace hkc
