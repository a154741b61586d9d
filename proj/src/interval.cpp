// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fps/rounding.hpp"

namespace fps {

namespace r = rounding;

namespace {

constexpr double inf = Interval::kInf;

Interval make_or_top(double lo, double hi, ArithFlags* flags) {
    if (std::isnan(lo) || std::isnan(hi)) {
        if (flags != nullptr) {
            flags->invalid = true;
        }
        return Interval::top();
    }
    return Interval(lo, hi);
}

} // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi)) {
        throw std::invalid_argument("interval bound is NaN");
    }
    if (lo > hi) {
        throw std::invalid_argument("interval lower bound exceeds upper bound");
    }
}

bool Interval::is_finite() const { return !is_bottom() && std::isfinite(lo_) && std::isfinite(hi_); }

double Interval::width() const {
    if (is_bottom()) {
        return 0.0;
    }
    return r::sub_up(hi_, lo_);
}

double Interval::mag() const {
    if (is_bottom()) {
        return 0.0;
    }
    return std::max(std::fabs(lo_), std::fabs(hi_));
}

double Interval::mig() const {
    if (is_bottom() || contains_zero()) {
        return 0.0;
    }
    return std::min(std::fabs(lo_), std::fabs(hi_));
}

bool Interval::operator==(const Interval& other) const {
    if (is_bottom() || other.is_bottom()) {
        return is_bottom() && other.is_bottom();
    }
    return lo_ == other.lo_ && hi_ == other.hi_;
}

std::ostream& operator<<(std::ostream& os, const Interval& a) {
    if (a.is_bottom()) {
        return os << "_|_";
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo(), a.hi());
    return os << buf;
}

std::string to_string(const Interval& a) {
    std::ostringstream os;
    os << a;
    return os.str();
}

Interval ivl_neg(const Interval& a) {
    if (a.is_bottom()) {
        return a;
    }
    return Interval(-a.hi(), -a.lo());
}

Interval ivl_add(const Interval& a, const Interval& b, ArithFlags* flags) {
    if (a.is_bottom() || b.is_bottom()) {
        return Interval::bottom();
    }
    return make_or_top(r::add_down(a.lo(), b.lo()), r::add_up(a.hi(), b.hi()), flags);
}

Interval ivl_sub(const Interval& a, const Interval& b, ArithFlags* flags) {
    if (a.is_bottom() || b.is_bottom()) {
        return Interval::bottom();
    }
    return make_or_top(r::sub_down(a.lo(), b.hi()), r::sub_up(a.hi(), b.lo()), flags);
}

Interval ivl_mul(const Interval& a, const Interval& b, ArithFlags* flags) {
    if (a.is_bottom() || b.is_bottom()) {
        return Interval::bottom();
    }
    const double xs[2] = {a.lo(), a.hi()};
    const double ys[2] = {b.lo(), b.hi()};
    double lo = inf;
    double hi = -inf;
    for (double x : xs) {
        for (double y : ys) {
            lo = std::min(lo, r::mul_down(x, y));
            hi = std::max(hi, r::mul_up(x, y));
        }
    }
    return make_or_top(lo, hi, flags);
}

Interval ivl_div(const Interval& a, const Interval& b, ArithFlags* flags) {
    if (a.is_bottom() || b.is_bottom()) {
        return Interval::bottom();
    }
    if (b.contains_zero()) {
        throw DomainError("interval division by an interval containing zero");
    }
    const double xs[2] = {a.lo(), a.hi()};
    const double ys[2] = {b.lo(), b.hi()};
    double lo = inf;
    double hi = -inf;
    bool nan = false;
    for (double x : xs) {
        for (double y : ys) {
            const double d = r::div_down(x, y);
            const double u = r::div_up(x, y);
            if (std::isnan(d) || std::isnan(u)) {
                nan = true;
                continue;
            }
            lo = std::min(lo, d);
            hi = std::max(hi, u);
        }
    }
    if (nan) {
        // inf/inf: the quotient set is unbounded on that side
        return make_or_top(std::nan(""), 0.0, flags);
    }
    return make_or_top(lo, hi, flags);
}

Interval ivl_sqrt(const Interval& a) {
    if (a.is_bottom()) {
        return a;
    }
    if (a.lo() < 0) {
        throw DomainError("square root of an interval reaching below zero");
    }
    return Interval(r::sqrt_down(a.lo()), r::sqrt_up(a.hi()));
}

Interval ivl_join(const Interval& a, const Interval& b) {
    if (a.is_bottom()) {
        return b;
    }
    if (b.is_bottom()) {
        return a;
    }
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval ivl_meet(const Interval& a, const Interval& b) {
    if (a.is_bottom() || b.is_bottom()) {
        return Interval::bottom();
    }
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        return Interval::bottom();
    }
    return Interval(lo, hi);
}

bool ivl_leq(const Interval& a, const Interval& b) {
    if (a.is_bottom()) {
        return true;
    }
    if (b.is_bottom()) {
        return false;
    }
    return b.lo() <= a.lo() && a.hi() <= b.hi();
}

Thresholds::Thresholds(std::vector<double> values) : values_(std::move(values)) {
    std::erase_if(values_, [](double v) { return std::isnan(v); });
    values_.push_back(-inf);
    values_.push_back(inf);
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

Thresholds Thresholds::parse(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = item.find_last_not_of(" \t");
        const std::string token = item.substr(first, last - first + 1);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0' || std::isnan(v)) {
            throw std::invalid_argument("bad threshold value '" + token + "'");
        }
        values.push_back(v);
    }
    return Thresholds(std::move(values));
}

double Thresholds::below(double x) const {
    auto it = std::upper_bound(values_.begin(), values_.end(), x);
    return *std::prev(it);
}

double Thresholds::above(double x) const { return *std::lower_bound(values_.begin(), values_.end(), x); }

Interval ivl_widen(const Interval& prev, const Interval& next, const Thresholds& thresholds) {
    if (prev.is_bottom()) {
        return next;
    }
    if (next.is_bottom()) {
        return prev;
    }
    const double lo = next.lo() < prev.lo() ? thresholds.below(next.lo()) : prev.lo();
    const double hi = next.hi() > prev.hi() ? thresholds.above(next.hi()) : prev.hi();
    return Interval(lo, hi);
}

std::optional<double> mid(const Interval& a) {
    if (!a.is_finite()) {
        return std::nullopt;
    }
    const double w = a.hi() - a.lo();
    double m = std::isfinite(w) ? a.lo() + 0.5 * w : 0.5 * a.lo() + 0.5 * a.hi();
    return std::clamp(m, a.lo(), a.hi());
}

double mid_or_fallback(const Interval& a) {
    if (a.is_bottom()) {
        throw std::invalid_argument("midpoint of an empty interval");
    }
    if (auto m = mid(a)) {
        return *m;
    }
    if (a.contains_zero()) {
        return 0.0;
    }
    return std::isfinite(a.lo()) ? a.lo() : a.hi();
}

} // namespace fps
