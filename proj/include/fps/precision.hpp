// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fps/interval.hpp"

namespace fps {

enum class Precision { single, double_, extended, double_rounding };

// A constant m * 2^e held exactly, with its directed roundings to binary64.
struct ExactConst {
    std::uint64_t mantissa = 0;
    int exponent = 0;
    double down = 0;
    double up = 0;

    static ExactConst make(std::uint64_t mantissa, int exponent);
    [[nodiscard]] bool exact_in_double() const { return down == up; }
    [[nodiscard]] ExactConst halved() const { return make(mantissa, exponent - 1); }
    [[nodiscard]] std::string describe() const;
};

// Rounding parameters of one floating-point format.
struct PrecisionProfile {
    Precision kind;
    std::string_view name;
    int p;           // significand bits
    int e_min;       // smallest normal exponent
    int e_max;       // largest exponent
    ExactConst u;    // relative rounding error unit
    ExactConst sigma;      // smallest positive subnormal
    ExactConst Sigma;      // largest finite value
    ExactConst half_sigma; // bound of the absolute error term
    ExactConst min_normal; // 2^e_min

    // [-u, u] and [-sigma/2, sigma/2], rounded outward.
    [[nodiscard]] Interval rel_error() const { return Interval(-u.up, u.up); }
    [[nodiscard]] Interval abs_error() const { return Interval(-half_sigma.up, half_sigma.up); }

    // Default widening thresholds: 0, +-sigma, +-2^e_min, +-1, +-2^k for
    // k = 4, 8, ..., e_max, +-Sigma, +-inf (clipped to the binary64 range).
    [[nodiscard]] Thresholds default_thresholds() const;
};

const PrecisionProfile& profile(Precision kind);
std::optional<Precision> parse_precision(std::string_view name);
std::string_view precision_name(Precision kind);

// Interval enclosing the decimal literal as read into the profile's format:
// a point for single, double and double-rounding, a binary64 enclosure of the
// 64-bit-significand value for extended. Throws std::invalid_argument.
Interval literal_interval(Precision kind, const std::string& text);

// The literal as the concrete program sees it.
long double literal_value(Precision kind, const std::string& text);

// Input range [lo, hi] shrunk to the values the concrete format can take
// (binary32 grid for single, binary64 otherwise). Empty when nothing fits.
Interval input_interval(Precision kind, const std::string& lo, const std::string& hi);

// Interval enclosing the exact value of a decimal (or hex) literal; a point
// when the value is a binary64 number.
Interval real_literal_interval(const std::string& text);

// Rounds a concrete value into the profile's storage format.
long double to_format(Precision kind, long double x);

// Whether x (a binary64) is a value of the profile's format.
bool representable(Precision kind, double x);

} // namespace fps
