// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fps {

// Raised by interval division by an interval containing zero and by the square
// root of an interval reaching below zero.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Side channel for operations whose concrete counterpart could produce NaN.
struct ArithFlags {
    bool invalid = false;
};

// Closed interval of binary64 endpoints, possibly infinite, or Bottom.
class Interval {
    double lo_;
    double hi_;

    struct Raw {};
    constexpr Interval(Raw, double lo, double hi) : lo_(lo), hi_(hi) {}

  public:
    // Throws std::invalid_argument on NaN or lo > hi.
    Interval(double lo, double hi);
    explicit Interval(double x) : Interval(x, x) {}

    static constexpr Interval bottom() { return {Raw{}, kInf, -kInf}; }
    static constexpr Interval top() { return {Raw{}, -kInf, kInf}; }
    static Interval point(double x) { return Interval(x, x); }

    [[nodiscard]] bool is_bottom() const { return lo_ > hi_; }
    [[nodiscard]] bool is_top() const { return lo_ == -kInf && hi_ == kInf; }
    [[nodiscard]] bool is_point() const { return lo_ == hi_; }
    [[nodiscard]] bool is_finite() const;
    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
    [[nodiscard]] bool contains_zero() const { return contains(0.0); }

    // hi - lo rounded up; 0 for Bottom.
    [[nodiscard]] double width() const;
    // Largest and smallest absolute value over the interval.
    [[nodiscard]] double mag() const;
    [[nodiscard]] double mig() const;

    bool operator==(const Interval& other) const;

    static constexpr double kInf = std::numeric_limits<double>::infinity();
};

std::ostream& operator<<(std::ostream& os, const Interval& a);
std::string to_string(const Interval& a);

// Arithmetic. Bottom operands give Bottom. NaN-producing endpoint combinations
// give top and set `flags->invalid`.
Interval ivl_neg(const Interval& a);
Interval ivl_add(const Interval& a, const Interval& b, ArithFlags* flags = nullptr);
Interval ivl_sub(const Interval& a, const Interval& b, ArithFlags* flags = nullptr);
Interval ivl_mul(const Interval& a, const Interval& b, ArithFlags* flags = nullptr);
// Throws DomainError when 0 is in b.
Interval ivl_div(const Interval& a, const Interval& b, ArithFlags* flags = nullptr);
// Throws DomainError when a.lo < 0.
Interval ivl_sqrt(const Interval& a);

// Lattice.
Interval ivl_join(const Interval& a, const Interval& b);
Interval ivl_meet(const Interval& a, const Interval& b);
bool ivl_leq(const Interval& a, const Interval& b);

// Sorted widening thresholds. Always contains -inf and +inf.
class Thresholds {
    std::vector<double> values_;

  public:
    explicit Thresholds(std::vector<double> values);

    // Parses a comma-separated list of decimal or hex floats.
    static Thresholds parse(const std::string& text);

    // Largest threshold <= x and smallest threshold >= x.
    [[nodiscard]] double below(double x) const;
    [[nodiscard]] double above(double x) const;
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
};

// Unstable bounds jump to the next threshold; stable bounds are kept.
Interval ivl_widen(const Interval& prev, const Interval& next, const Thresholds& thresholds);

// a.lo + 0.5 * (a.hi - a.lo) in binary64, clamped into a. Empty for Bottom or
// an infinite bound.
std::optional<double> mid(const Interval& a);

// mid(a), or for an unbounded interval: 0 when it contains 0, else its finite bound.
double mid_or_fallback(const Interval& a);

} // namespace fps
