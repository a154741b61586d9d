// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/rounding.hpp"

#include <cmath>
#include <limits>

namespace fps::rounding {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double max_finite = std::numeric_limits<double>::max();

// Below this magnitude fma residuals can underflow and stop being exact.
constexpr double residual_floor = 0x1p-960;

enum class Side { below, exact, above };

// Where the rounded sum s = fl(a+b) sits relative to a+b (TwoSum, exact for finite s).
Side sum_side(double a, double b, double s) {
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    if (err > 0) {
        return Side::below;
    }
    if (err < 0) {
        return Side::above;
    }
    return Side::exact;
}

// Finite operands whose rounded result overflowed.
double overflow_down(double r) { return r > 0 ? max_finite : -inf; }
double overflow_up(double r) { return r > 0 ? inf : -max_finite; }

Side product_side(double a, double b, double p) {
    // exact a*b - p, sign preserved by rounding away from the underflow zone
    const double e = std::fma(a, b, -p);
    if (e > 0) {
        return Side::below;
    }
    if (e < 0) {
        return Side::above;
    }
    return Side::exact;
}

Side quotient_side(double a, double b, double q) {
    // r = a - q*b exactly; sign(a/b - q) = sign(r) * sign(b)
    const double r = std::fma(-q, b, a);
    if (r == 0) {
        return Side::exact;
    }
    const bool true_above = (r > 0) == (b > 0);
    return true_above ? Side::below : Side::above;
}

Side sqrt_side(double a, double s) {
    const double r = std::fma(-s, s, a);
    if (r > 0) {
        return Side::below;
    }
    if (r < 0) {
        return Side::above;
    }
    return Side::exact;
}

double settle_down(double r, Side side) { return side == Side::above ? next_down(r) : r; }
double settle_up(double r, Side side) { return side == Side::below ? next_up(r) : r; }

} // namespace

double next_up(double x) { return std::nextafter(x, inf); }
double next_down(double x) { return std::nextafter(x, -inf); }

double add_down(double a, double b) {
    const double s = a + b;
    if (std::isnan(s)) {
        return s;
    }
    if (std::isinf(s)) {
        return (std::isfinite(a) && std::isfinite(b)) ? overflow_down(s) : s;
    }
    return settle_down(s, sum_side(a, b, s));
}

double add_up(double a, double b) {
    const double s = a + b;
    if (std::isnan(s)) {
        return s;
    }
    if (std::isinf(s)) {
        return (std::isfinite(a) && std::isfinite(b)) ? overflow_up(s) : s;
    }
    return settle_up(s, sum_side(a, b, s));
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    if (a == 0 || b == 0) {
        return 0.0;
    }
    const double p = a * b;
    if (std::isinf(p)) {
        return (std::isfinite(a) && std::isfinite(b)) ? overflow_down(p) : p;
    }
    if (std::fabs(p) < residual_floor) {
        return next_down(p);
    }
    return settle_down(p, product_side(a, b, p));
}

double mul_up(double a, double b) {
    if (a == 0 || b == 0) {
        return 0.0;
    }
    const double p = a * b;
    if (std::isinf(p)) {
        return (std::isfinite(a) && std::isfinite(b)) ? overflow_up(p) : p;
    }
    if (std::fabs(p) < residual_floor) {
        return next_up(p);
    }
    return settle_up(p, product_side(a, b, p));
}

double div_down(double a, double b) {
    if (a == 0 && b != 0) {
        return 0.0;
    }
    const double q = a / b;
    if (std::isnan(q)) {
        return q;
    }
    if (std::isinf(q)) {
        return (std::isfinite(a) && b != 0) ? overflow_down(q) : q;
    }
    if (std::isinf(b)) {
        return q;
    }
    if (std::fabs(q) < residual_floor || std::fabs(a) < residual_floor || std::fabs(b) < residual_floor) {
        return next_down(q);
    }
    return settle_down(q, quotient_side(a, b, q));
}

double div_up(double a, double b) {
    if (a == 0 && b != 0) {
        return 0.0;
    }
    const double q = a / b;
    if (std::isnan(q)) {
        return q;
    }
    if (std::isinf(q)) {
        return (std::isfinite(a) && b != 0) ? overflow_up(q) : q;
    }
    if (std::isinf(b)) {
        return q;
    }
    if (std::fabs(q) < residual_floor || std::fabs(a) < residual_floor || std::fabs(b) < residual_floor) {
        return next_up(q);
    }
    return settle_up(q, quotient_side(a, b, q));
}

double sqrt_down(double a) {
    if (a == 0 || std::isinf(a) || std::isnan(a) || a < 0) {
        return std::sqrt(a);
    }
    const double s = std::sqrt(a);
    if (a < residual_floor) {
        return next_down(s);
    }
    return settle_down(s, sqrt_side(a, s));
}

double sqrt_up(double a) {
    if (a == 0 || std::isinf(a) || std::isnan(a) || a < 0) {
        return std::sqrt(a);
    }
    const double s = std::sqrt(a);
    if (a < residual_floor) {
        return next_up(s);
    }
    return settle_up(s, sqrt_side(a, s));
}

} // namespace fps::rounding
