// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <limits>

#include "fps/precision.hpp"

using namespace fps;

TEST_CASE("profile constants") {
    const auto& s = profile(Precision::single);
    CHECK(s.u.up == std::ldexp(1.0, -24));
    CHECK(s.sigma.up == std::ldexp(1.0, -149));
    CHECK(s.sigma.up == static_cast<double>(std::numeric_limits<float>::denorm_min()));
    CHECK(s.Sigma.up == static_cast<double>(FLT_MAX));
    CHECK(s.half_sigma.down == std::ldexp(1.0, -150));

    const auto& d = profile(Precision::double_);
    CHECK(d.u.up == std::ldexp(1.0, -53));
    CHECK(d.sigma.up == std::numeric_limits<double>::denorm_min());
    CHECK(d.Sigma.up == DBL_MAX);
    // sigma/2 is not a binary64: bracketed by 0 and the smallest subnormal
    CHECK(d.half_sigma.down == 0.0);
    CHECK(d.half_sigma.up == std::numeric_limits<double>::denorm_min());

    const auto& e = profile(Precision::extended);
    CHECK(e.u.up == std::ldexp(1.0, -64));
    CHECK(e.sigma.mantissa == 1);
    CHECK(e.sigma.exponent == -16446);
    CHECK(e.Sigma.down == DBL_MAX);
    CHECK(e.Sigma.up == std::numeric_limits<double>::infinity());

    const auto& r = profile(Precision::double_rounding);
    CHECK(r.u.up == std::ldexp(2050.0, -64));
    CHECK(r.u.exact_in_double());
    CHECK(r.sigma.mantissa == 2049);
    CHECK(r.sigma.exponent == -1086);
    CHECK(r.sigma.down == 0.0);
    CHECK(r.sigma.up == std::numeric_limits<double>::denorm_min());
}

TEST_CASE("profile constants follow the format parameters") {
    for (Precision k : {Precision::single, Precision::double_}) {
        const auto& p = profile(k);
        CHECK(p.u.up == std::ldexp(1.0, -p.p));
        CHECK(p.sigma.up == std::ldexp(1.0, p.e_min - p.p + 1));
        CHECK(p.Sigma.up == std::ldexp(2.0 - std::ldexp(1.0, 1 - p.p), p.e_max));
        CHECK(p.e_max == -p.e_min + 1);
    }
}

TEST_CASE("directed conversion of exact constants") {
    const ExactConst third_ulp = ExactConst::make((std::uint64_t{1} << 60) + 1, 0);
    CHECK(third_ulp.down == std::ldexp(1.0, 60));
    CHECK(third_ulp.up == std::nextafter(std::ldexp(1.0, 60), INFINITY));
    CHECK(ExactConst::make(3, -2).exact_in_double());
    CHECK(ExactConst::make(3, -2).down == 0.75);
}

TEST_CASE("precision names") {
    CHECK(parse_precision("double-rounding") == Precision::double_rounding);
    CHECK(parse_precision("single") == Precision::single);
    CHECK_FALSE(parse_precision("quad").has_value());
    CHECK(precision_name(Precision::extended) == "extended");
}

TEST_CASE("literals") {
    CHECK(literal_interval(Precision::single, "0.7") == Interval::point(static_cast<double>(0.7f)));
    CHECK(literal_interval(Precision::double_, "0.7") == Interval::point(0.7));
    const Interval e = literal_interval(Precision::extended, "0.7");
    CHECK(e.contains(static_cast<double>(0.7L)));
    CHECK(e.lo() < e.hi());
    CHECK(static_cast<long double>(e.lo()) < 0.7L);
    CHECK(static_cast<long double>(e.hi()) > 0.7L);
    CHECK(literal_value(Precision::single, "0.7") == static_cast<long double>(0.7f));
    CHECK_THROWS_AS(literal_interval(Precision::double_, "0.7x"), std::invalid_argument);
}

TEST_CASE("input ranges are rounded inward") {
    const Interval s = input_interval(Precision::single, "0.71", "1.35");
    CHECK(s.lo() >= 0.71);
    CHECK(s.hi() <= 1.35);
    CHECK(representable(Precision::single, s.lo()));
    CHECK(representable(Precision::single, s.hi()));
    CHECK(std::nextafter(static_cast<float>(s.lo()), 0.0f) < 0.71);
    const Interval d = input_interval(Precision::double_, "4", "8");
    CHECK(d == Interval(4, 8));
}

TEST_CASE("default thresholds") {
    const Thresholds t = profile(Precision::single).default_thresholds();
    CHECK(t.above(2.0) == 16.0);
    CHECK(t.above(1e38) == static_cast<double>(FLT_MAX));
    CHECK(t.above(0.5) == 1.0);
    CHECK(t.below(0.5) == std::ldexp(1.0, -126));
    CHECK(t.above(1e-45) == std::ldexp(1.0, -149));
    CHECK(t.below(-2.0) == -16.0);
    const Thresholds e = profile(Precision::extended).default_thresholds();
    CHECK(e.above(1e308) == DBL_MAX);
}
