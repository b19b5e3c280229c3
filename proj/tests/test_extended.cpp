#include <doctest.h>

#include <limits>

#include "imc/extended.hpp"

using namespace imc;

TEST_CASE("extended values follow the zero-times-infinity convention") {
    const ExtValue inf = ExtValue::infinity();
    CHECK(scale(0.0, inf) == ExtValue(0.0));
    CHECK(scale(0.5, inf).is_infinite());
    CHECK((ExtValue(3.0) + inf).is_infinite());
    CHECK((inf + inf).is_infinite());
    CHECK(scale(0.25, ExtValue(4.0)) == ExtValue(1.0));
}

TEST_CASE("minus infinity is unrepresentable") {
    CHECK_THROWS_AS(ExtValue(-std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(ExtValue(std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(ExtValue(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST_CASE("ordering puts infinity above every real") {
    const ExtValue inf = ExtValue::infinity();
    CHECK(ExtValue(1e300) < inf);
    CHECK(inf == ExtValue::infinity());
    CHECK_FALSE(inf < inf);
    CHECK(ext_max(ExtValue(2.0), inf).is_infinite());
    CHECK(ext_min(ExtValue(2.0), inf) == ExtValue(2.0));
}

TEST_CASE("extended dot ignores infinite coordinates with zero weight") {
    ExtVector f{ExtValue(1.0), ExtValue::infinity(), ExtValue(2.0)};
    CHECK(ext_dot({0.5, 0.0, 0.5}, f) == ExtValue(1.5));
    CHECK(ext_dot({0.5, 0.25, 0.25}, f).is_infinite());
    CHECK_THROWS_AS(ext_dot({1.0}, f), DimensionMismatchError);
}
