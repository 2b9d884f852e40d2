#include "hkc/report.hpp"
#include "hkc/rng.hpp"

#include <doctest.h>

#include <stdexcept>
#include <string>

using namespace hkc;

TEST_CASE("number formatting") {
    CHECK(format_number(1.0 / 3) == "0.333333333333");
    CHECK(format_number(12.5) == "12.5000000000");
    CHECK(format_number(0.0) == "0.00000000000");
    CHECK(format_number(-0.0) == "0.00000000000");
    CHECK(format_number(1e4) == "10000.0000000");
    CHECK(format_number(9.99999999999996) == "10.0000000000");
    CHECK(format_number(0.0026246719160105) == "0.00262467191601");
    CHECK(format_number(-2.5) == "-2.50000000000");
    CHECK(format_number(123456789012345.0) == "123456789012345");
}

TEST_CASE("render layout") {
    Report r;
    r.section("graph").field("n", "4").field("eps", 0.1, "default");
    r.section("vector").table({"node", "value"}).row({"0", "1"}).row({"3", "0.5"});
    CHECK(r.render() ==
          "[graph]\n"
          "n = 4\n"
          "eps = 0.100000000000  # default\n"
          "\n"
          "[vector]\n"
          "columns: node value\n"
          "0 1\n"
          "3 0.5\n");
}

TEST_CASE("round trip") {
    Report r;
    r.section("run").field("command", "hkc cluster data/two_cliques.txt --seed-node 3 --phi 0.0027", "argv");
    r.section("empty");
    auto& s = r.section("mixed");
    s.field("note", "polylog factors omitted (x = y)").field("blank", "", "derived");
    s.table({"a", "b", "c"}).row({"1", "2", "3"});
    CHECK(parse_report(r.render()) == r);

    // Random reports.
    for (std::uint64_t i = 0; i < 100; ++i) {
        Rng rng = Rng::keyed(i, {1});
        Report random;
        const auto sections = 1 + rng.below(4);
        for (std::uint64_t j = 0; j < sections; ++j) {
            auto& sec = random.section("s" + std::to_string(j));
            const auto fields = rng.below(4);
            for (std::uint64_t f = 0; f < fields; ++f) {
                sec.field("k" + std::to_string(f), format_number(rng.uniform() * 1000 - 500),
                          rng.below(2) ? "flag" : "");
            }
            if (rng.below(2)) {
                sec.table({"x", "y"});
                for (std::uint64_t row = rng.below(5); row > 0; --row) {
                    sec.row({std::to_string(rng.below(100)), format_number(rng.uniform())});
                }
            }
        }
        CHECK(parse_report(random.render()) == random);
    }
}

TEST_CASE("rejects unrenderable content and malformed text") {
    Report bad;
    bad.section("a").field("two words", "x");
    CHECK_THROWS_AS(bad.render(), std::invalid_argument);
    Report bad_value;
    bad_value.section("a").field("k", "x  # y");
    CHECK_THROWS_AS(bad_value.render(), std::invalid_argument);
    Report bad_row;
    CHECK_THROWS_AS(bad_row.section("a").table({"x"}).row({"1", "2"}), std::invalid_argument);

    CHECK_THROWS_AS(parse_report("k = v\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_report("[a]\nno separator\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_report("[a]\ncolumns: x y\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_report("[a\n"), std::invalid_argument);
}
