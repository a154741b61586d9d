// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/precision.hpp"

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fps/rounding.hpp"

namespace fps {

static_assert(std::numeric_limits<long double>::digits >= 64,
              "profile constants and the extended oracle need a 64-bit long double significand");

ExactConst ExactConst::make(std::uint64_t mantissa, int exponent) {
    ExactConst c{mantissa, exponent, 0.0, 0.0};
    if (mantissa == 0) {
        return c;
    }
    const long double v = std::ldexp(static_cast<long double>(mantissa), exponent);
    if (v == 0 || v < LDBL_MIN) {
        // far below the binary64 subnormal range
        c.down = 0.0;
        c.up = std::numeric_limits<double>::denorm_min();
        return c;
    }
    if (std::isinf(v) || v > static_cast<long double>(DBL_MAX)) {
        c.down = DBL_MAX;
        c.up = std::numeric_limits<double>::infinity();
        return c;
    }
    const double near = static_cast<double>(v);
    const long double back = near;
    if (back == v) {
        c.down = c.up = near;
    } else if (back < v) {
        c.down = near;
        c.up = rounding::next_up(near);
    } else {
        c.down = rounding::next_down(near);
        c.up = near;
    }
    return c;
}

std::string ExactConst::describe() const {
    return std::to_string(mantissa) + "*2^" + std::to_string(exponent);
}

Thresholds PrecisionProfile::default_thresholds() const {
    std::vector<double> t{0.0, 1.0, -1.0};
    const double small[] = {sigma.down, sigma.up, min_normal.up};
    for (double s : small) {
        if (s > 0) {
            t.push_back(s);
            t.push_back(-s);
        }
    }
    for (int k = 4; k <= e_max; k += 4) {
        const double v = std::ldexp(1.0, k);
        if (std::isinf(v)) {
            break;
        }
        t.push_back(v);
        t.push_back(-v);
    }
    t.push_back(Sigma.down);
    t.push_back(-Sigma.down);
    return Thresholds(std::move(t));
}

namespace {

PrecisionProfile build(Precision kind, std::string_view name, int p, int e_min, int e_max, ExactConst u,
                       ExactConst sigma, ExactConst Sigma) {
    return PrecisionProfile{kind, name, p, e_min, e_max, u, sigma, Sigma, sigma.halved(), ExactConst::make(1, e_min)};
}

constexpr std::uint64_t ones(int bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

const PrecisionProfile kSingle =
    build(Precision::single, "single", 24, -126, 127, ExactConst::make(1, -24), ExactConst::make(1, -149),
          ExactConst::make(ones(24), 127 - 23));
const PrecisionProfile kDouble =
    build(Precision::double_, "double", 53, -1022, 1023, ExactConst::make(1, -53), ExactConst::make(1, -1074),
          ExactConst::make(ones(53), 1023 - 52));
const PrecisionProfile kExtended =
    build(Precision::extended, "extended", 64, -16382, 16383, ExactConst::make(1, -64),
          ExactConst::make(1, -16446), ExactConst::make(ones(64), 16383 - 63));
// A 64-bit-significand rounding followed by a rounding to binary64.
const PrecisionProfile kDoubleRounding =
    build(Precision::double_rounding, "double-rounding", 53, -1022, 1023, ExactConst::make((1u << 11) + 2, -64),
          ExactConst::make((1u << 11) + 1, -1086), ExactConst::make(ones(53), 1023 - 52));

long double parse_long_double(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    const long double v = std::strtold(s, &end);
    if (end == s || *end != '\0' || std::isnan(v)) {
        throw std::invalid_argument("bad numeric literal '" + text + "'");
    }
    return v;
}

template <class F>
F round_inward_lo(long double v) {
    F f = static_cast<F>(v);
    if (static_cast<long double>(f) < v) {
        f = std::nextafter(f, std::numeric_limits<F>::infinity());
    }
    return f;
}

template <class F>
F round_inward_hi(long double v) {
    F f = static_cast<F>(v);
    if (static_cast<long double>(f) > v) {
        f = std::nextafter(f, -std::numeric_limits<F>::infinity());
    }
    return f;
}

// Whether a decimal literal denotes a binary64 value exactly. Conservative:
// false when unsure.
bool decimal_is_double(const std::string& text) {
    using u128 = unsigned __int128;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        ++i;
    }
    u128 digits = 0;
    int exp10 = 0;
    bool seen_point = false;
    bool any = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') {
            break;
        }
        any = true;
        if (digits > (~u128{0}) / 20) {
            return false;
        }
        digits = digits * 10 + static_cast<unsigned>(c - '0');
        if (seen_point) {
            --exp10;
        }
    }
    if (!any) {
        return false;
    }
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') {
            return false;
        }
        exp10 += std::atoi(text.c_str() + i + 1);
    }
    if (digits == 0) {
        return true;
    }
    for (; exp10 > 0; --exp10) {
        if (digits > (~u128{0}) / 20) {
            return false;
        }
        digits *= 10;
    }
    int exp2 = 0;
    for (; exp10 < 0; ++exp10) {
        if (digits % 5 != 0) {
            return false;
        }
        digits /= 5;
        --exp2;
    }
    while (digits % 2 == 0) {
        digits /= 2;
        ++exp2;
    }
    if (digits >> 53 != 0) {
        return false;
    }
    const double v = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(digits)), exp2);
    return v != 0 && std::isfinite(v) &&
           std::ldexp(v, -exp2) == static_cast<double>(static_cast<std::uint64_t>(digits));
}

} // namespace

Interval real_literal_interval(const std::string& text) {
    const long double lv = parse_long_double(text);
    char* end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    const bool hex = text.find("0x") != std::string::npos || text.find("0X") != std::string::npos;
    if (hex ? static_cast<long double>(d) == lv && std::isfinite(d) : decimal_is_double(text)) {
        return Interval::point(d);
    }
    if (std::isinf(d)) {
        return d > 0 ? Interval(DBL_MAX, d) : Interval(d, -DBL_MAX);
    }
    return Interval(rounding::next_down(d), rounding::next_up(d));
}

const PrecisionProfile& profile(Precision kind) {
    switch (kind) {
    case Precision::single: return kSingle;
    case Precision::double_: return kDouble;
    case Precision::extended: return kExtended;
    case Precision::double_rounding: return kDoubleRounding;
    }
    throw std::logic_error("unknown precision");
}

std::optional<Precision> parse_precision(std::string_view name) {
    for (Precision p : {Precision::single, Precision::double_, Precision::extended, Precision::double_rounding}) {
        if (profile(p).name == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::string_view precision_name(Precision kind) { return profile(kind).name; }

long double literal_value(Precision kind, const std::string& text) {
    const long double v = parse_long_double(text);
    switch (kind) {
    case Precision::single: {
        char* end = nullptr;
        return std::strtof(text.c_str(), &end);
    }
    case Precision::double_:
    case Precision::double_rounding: {
        char* end = nullptr;
        return std::strtod(text.c_str(), &end);
    }
    case Precision::extended: return v;
    }
    return v;
}

Interval literal_interval(Precision kind, const std::string& text) {
    const long double v = literal_value(kind, text);
    const double near = static_cast<double>(v);
    const long double back = near;
    if (back == v) {
        return Interval::point(near);
    }
    return back < v ? Interval(near, rounding::next_up(near)) : Interval(rounding::next_down(near), near);
}

Interval input_interval(Precision kind, const std::string& lo, const std::string& hi) {
    const long double l = parse_long_double(lo);
    const long double h = parse_long_double(hi);
    double a;
    double b;
    if (kind == Precision::single) {
        a = round_inward_lo<float>(l);
        b = round_inward_hi<float>(h);
    } else {
        a = round_inward_lo<double>(l);
        b = round_inward_hi<double>(h);
    }
    if (a > b) {
        return Interval::bottom();
    }
    return Interval(a, b);
}

long double to_format(Precision kind, long double x) {
    switch (kind) {
    case Precision::single: return static_cast<float>(x);
    case Precision::double_:
    case Precision::double_rounding: return static_cast<double>(x);
    case Precision::extended: return x;
    }
    return x;
}

bool representable(Precision kind, double x) {
    if (kind == Precision::single) {
        return std::isnan(x) || static_cast<double>(static_cast<float>(x)) == x;
    }
    return true;
}

} // namespace fps
