// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "op_fuzz.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "fps/slope.hpp"

namespace fps::testing {

namespace {

constexpr mpfr_prec_t kExactBits = 5000;

class Mp {
  public:
    Mp() { mpfr_init2(v, kExactBits); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
    mpfr_t v;
};

double to_format_double(Precision p, double x) {
    return p == Precision::single ? static_cast<double>(static_cast<float>(x)) : x;
}

// Random value of a given magnitude class for the profile's range.
double magnitude(Precision p, int klass, std::mt19937_64& rng) {
    const auto& prof = profile(p);
    std::uniform_real_distribution<double> mant(1.0, 2.0);
    int lo = -8;
    int hi = 8;
    switch (klass) {
    case 1:
        lo = -30;
        hi = 30;
        break;
    case 2: // around half the smallest subnormal
        lo = prof.e_min - prof.p - 2;
        hi = prof.e_min - prof.p + 10;
        break;
    case 3: // close to the largest finite value
        lo = std::min(prof.e_max, 1023) - 6;
        hi = std::min(prof.e_max, 1023);
        break;
    default: break;
    }
    std::uniform_int_distribution<int> ex(lo, hi);
    return std::ldexp(mant(rng), ex(rng));
}

struct Draw {
    std::mt19937_64& rng;
    Precision p;

    bool coin(double prob) { return std::uniform_real_distribution<double>(0, 1)(rng) < prob; }

    double sign() { return coin(0.5) ? -1.0 : 1.0; }

    Interval around(double c, double spread) {
        std::uniform_real_distribution<double> t(0, 1);
        const double a = c - spread * t(rng);
        const double b = c + spread * t(rng);
        if (!std::isfinite(a) || !std::isfinite(b) || a > b) {
            return Interval::point(c);
        }
        return Interval(a, b);
    }

    Registry registry() {
        Registry reg;
        const int k = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < k; ++i) {
            double a = to_format_double(p, sign() * magnitude(p, 0, rng));
            double b = coin(0.2) ? a : to_format_double(p, a + magnitude(p, 0, rng));
            if (a > b) {
                std::swap(a, b);
            }
            reg.add("v" + std::to_string(i), Interval(a, b), Registry::Origin::input);
        }
        return reg;
    }

    std::vector<long double> point(const Registry& reg) {
        std::vector<long double> u;
        for (const auto& e : reg.entries()) {
            const int k = static_cast<int>(rng() % 4);
            double x = k == 0 ? e.value.lo() : k == 1 ? e.value.hi() : 0.0;
            if (k >= 2) {
                std::uniform_real_distribution<double> t(0, 1);
                x = to_format_double(p, e.value.lo() + t(rng) * (e.value.hi() - e.value.lo()));
                x = std::clamp(x, e.value.lo(), e.value.hi());
            }
            u.push_back(x);
        }
        return u;
    }

    FpsValue value(const Registry& reg, bool positive) {
        if (coin(0.03)) {
            return positive || coin(0.5) ? FpsValue::pos_overflow() : FpsValue::neg_overflow();
        }
        const int klass = static_cast<int>(rng() % 5);
        double c = klass == 4 ? 0.0 : magnitude(p, klass, rng);
        if (!positive) {
            c *= sign();
        }
        static const double rel[] = {0.0, 0x1p-20, 0x1p-8, 0.5};
        double scale = klass == 4 ? magnitude(p, static_cast<int>(rng() % 3), rng) : std::fabs(c);
        FpsValue v{around(c, scale * rel[rng() % 4]), {}};
        for (std::size_t i = 0; i < reg.size(); ++i) {
            if (coin(0.3)) {
                v.S.push_back(Interval::point(0.0));
                continue;
            }
            std::uniform_int_distribution<int> ex(-10, 0);
            const double s = sign() * std::ldexp(scale, ex(rng)) / std::max(1.0, reg[i].value.mag());
            v.S.push_back(around(s, std::fabs(s) * rel[rng() % 4]));
        }
        return v;
    }
};

// Exact concretization of v at u, rounded inward.
void exact_at(const FpsValue& v, const Registry& reg, const std::vector<long double>& u, Mp& lo, Mp& hi) {
    Mp d;
    Mp p1;
    Mp p2;
    mpfr_set_d(lo.v, v.M.lo(), MPFR_RNDU);
    mpfr_set_d(hi.v, v.M.hi(), MPFR_RNDD);
    for (std::size_t i = 0; i < v.S.size(); ++i) {
        if (v.S[i].lo() == 0 && v.S[i].hi() == 0) {
            continue;
        }
        mpfr_set_ld(d.v, u[i], MPFR_RNDN);
        mpfr_sub_d(d.v, d.v, reg[i].mid, MPFR_RNDN);
        mpfr_mul_d(p1.v, d.v, v.S[i].lo(), MPFR_RNDU);
        mpfr_mul_d(p2.v, d.v, v.S[i].hi(), MPFR_RNDU);
        mpfr_add(lo.v, lo.v, mpfr_cmp(p1.v, p2.v) < 0 ? p1.v : p2.v, MPFR_RNDU);
        mpfr_mul_d(p1.v, d.v, v.S[i].lo(), MPFR_RNDD);
        mpfr_mul_d(p2.v, d.v, v.S[i].hi(), MPFR_RNDD);
        mpfr_add(hi.v, hi.v, mpfr_cmp(p1.v, p2.v) > 0 ? p1.v : p2.v, MPFR_RNDD);
    }
}

long double inward_lo(Precision p, const Mp& x) {
    if (p == Precision::extended) {
        return mpfr_get_ld(x.v, MPFR_RNDU);
    }
    const double d = mpfr_get_d(x.v, MPFR_RNDU);
    if (p != Precision::single) {
        return d;
    }
    float f = static_cast<float>(d);
    if (static_cast<double>(f) < d) {
        f = std::nextafter(f, std::numeric_limits<float>::infinity());
    }
    return f;
}

long double inward_hi(Precision p, const Mp& x) {
    if (p == Precision::extended) {
        return mpfr_get_ld(x.v, MPFR_RNDD);
    }
    const double d = mpfr_get_d(x.v, MPFR_RNDD);
    if (p != Precision::single) {
        return d;
    }
    float f = static_cast<float>(d);
    if (static_cast<double>(f) > d) {
        f = std::nextafter(f, -std::numeric_limits<float>::infinity());
    }
    return f;
}

std::vector<long double> witnesses(Precision p, const FpsValue& v, const Registry& reg,
                                   const std::vector<long double>& u, std::mt19937_64& rng) {
    if (v.is_pos_overflow()) {
        return {std::numeric_limits<long double>::infinity()};
    }
    if (v.is_neg_overflow()) {
        return {-std::numeric_limits<long double>::infinity()};
    }
    Mp lo;
    Mp hi;
    exact_at(v, reg, u, lo, hi);
    const long double a = inward_lo(p, lo);
    const long double b = inward_hi(p, hi);
    if (!(a <= b) || std::isinf(a) || std::isinf(b)) {
        return {};
    }
    std::uniform_real_distribution<long double> t(0, 1);
    long double m = a + t(rng) * (b - a);
    if (!std::isfinite(m)) {
        m = a;
    }
    m = std::clamp(to_format(p, m), a, b);
    return {a, b, m};
}

long double apply(Precision p, FuzzOp op, long double x, long double y) {
    switch (p) {
    case Precision::single: {
        const float a = static_cast<float>(x);
        const float b = static_cast<float>(y);
        switch (op) {
        case FuzzOp::add: return a + b;
        case FuzzOp::sub: return a - b;
        case FuzzOp::mul: return a * b;
        case FuzzOp::div: return a / b;
        case FuzzOp::sqrt: return std::sqrt(a);
        }
        break;
    }
    case Precision::double_: {
        const double a = static_cast<double>(x);
        const double b = static_cast<double>(y);
        switch (op) {
        case FuzzOp::add: return a + b;
        case FuzzOp::sub: return a - b;
        case FuzzOp::mul: return a * b;
        case FuzzOp::div: return a / b;
        case FuzzOp::sqrt: return std::sqrt(a);
        }
        break;
    }
    case Precision::extended:
    case Precision::double_rounding: {
        long double r = 0;
        switch (op) {
        case FuzzOp::add: r = x + y; break;
        case FuzzOp::sub: r = x - y; break;
        case FuzzOp::mul: r = x * y; break;
        case FuzzOp::div: r = x / y; break;
        case FuzzOp::sqrt: r = std::sqrt(x); break;
        }
        return p == Precision::extended ? r : static_cast<long double>(static_cast<double>(r));
    }
    }
    return 0;
}

FpsValue run(FuzzOp op, const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    switch (op) {
    case FuzzOp::add: return fps_add(g, h, ctx);
    case FuzzOp::sub: return fps_sub(g, h, ctx);
    case FuzzOp::mul: return fps_mul(g, h, ctx);
    case FuzzOp::div: return fps_div(g, h, ctx);
    case FuzzOp::sqrt: return fps_sqrt(g, ctx);
    }
    return g;
}

} // namespace

const char* op_name(FuzzOp op) {
    switch (op) {
    case FuzzOp::add: return "add";
    case FuzzOp::sub: return "sub";
    case FuzzOp::mul: return "mul";
    case FuzzOp::div: return "div";
    case FuzzOp::sqrt: return "sqrt";
    }
    return "?";
}

OpFuzzResult fuzz_operation(Precision precision, FuzzOp op, long pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Draw draw{rng, precision};
    OpFuzzResult result;
    const auto& prof = profile(precision);
    for (long n = 0; n < pairs; ++n) {
        Registry reg = draw.registry();
        const FpsValue g = draw.value(reg, op == FuzzOp::sqrt && draw.coin(0.8));
        const FpsValue h = draw.value(reg, false);
        const std::vector<long double> u = draw.point(reg);
        OpEvents events;
        SlopeContext ctx{reg, prof, Arith::floating, SlopeForm::best, &events};
        const FpsValue res = run(op, g, h, ctx);
        const Interval whole = enclosure(res, reg);
        const Interval at = enclosure_at(res, reg, u);
        ++result.pairs;
        const auto xs = witnesses(precision, g, reg, u, rng);
        const auto ys = op == FuzzOp::sqrt ? std::vector<long double>{0} : witnesses(precision, h, reg, u, rng);
        for (long double x : xs) {
            for (long double y : ys) {
                const long double r = apply(precision, op, x, y);
                ++result.checks;
                bool ok = true;
                if (std::isnan(r)) {
                    ok = events.invalid || events.division_by_zero || events.invalid_sqrt;
                    if (!ok) {
                        ++result.nan_unflagged;
                    }
                } else {
                    ok = whole.lo() <= r && r <= whole.hi() && at.lo() <= r && r <= at.hi();
                }
                if (!ok) {
                    ++result.violations;
                    if (result.first_violation.empty()) {
                        std::ostringstream os;
                        os.precision(21);
                        os << precision_name(precision) << " " << op_name(op) << ": g=" << to_string(g)
                           << " h=" << to_string(h) << " x=" << x << " y=" << y << " r=" << r
                           << " result=" << to_string(res) << " enclosure=" << whole << " at-point=" << at;
                        result.first_violation = os.str();
                    }
                }
            }
        }
    }
    return result;
}

} // namespace fps::testing
