#include "golden.hpp"

#include <doctest.h>

TEST_CASE("stochastic reports are byte-identical across runs and match the stored copies") {
    const auto cases = hkc::golden::load_cases();
    REQUIRE(cases.size() >= 6);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        const auto o = hkc::golden::check(c);
        INFO(o.detail);
        CHECK(o.repeatable);
        CHECK(o.matches);
    }
}
