// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fps/interval.hpp"
#include "fps/precision.hpp"

namespace fps {

// Independent variables: the values they range over and the expansion points
// frozen at registration. Indices are stable; the registry only grows.
class Registry {
  public:
    enum class Origin { input, state, meet };

    struct Entry {
        std::string name;
        Interval value;
        double mid;
        Interval offset; // value - mid, rounded outward
        Origin origin;
        // For Origin::meet: where the refinement happened.
        int step = -1;
        int site = -1;
        bool then_branch = true;
    };

    std::size_t add(std::string name, const Interval& value, Origin origin);
    std::size_t add_meet(std::string name, const Interval& value, int step, int site, bool then_branch);

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const Entry& operator[](std::size_t i) const { return entries_.at(i); }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

  private:
    std::vector<Entry> entries_;
};

// (M, S): M encloses the value at the expansion point, S holds one slope per
// independent variable. Coordinates beyond S.size() are implicitly [0,0]
// (or [+-inf] for the overflow values).
struct FpsValue {
    Interval M = Interval::point(0.0);
    std::vector<Interval> S;

    static FpsValue constant(const Interval& x) { return {x, {}}; }
    static FpsValue top() { return {Interval::top(), {}}; }
    static FpsValue pos_overflow() { return {Interval::point(Interval::kInf), {}}; }
    static FpsValue neg_overflow() { return {Interval::point(-Interval::kInf), {}}; }

    [[nodiscard]] bool is_pos_overflow() const { return M.is_point() && M.lo() == Interval::kInf; }
    [[nodiscard]] bool is_neg_overflow() const { return M.is_point() && M.lo() == -Interval::kInf; }
    [[nodiscard]] bool is_overflow() const { return is_pos_overflow() || is_neg_overflow(); }

    [[nodiscard]] Interval slope(std::size_t i) const;

    bool operator==(const FpsValue& other) const;
};

std::string to_string(const FpsValue& v);

// Events raised while evaluating an operation; the analyzer turns them into
// diagnostics.
struct OpEvents {
    bool division_by_zero = false;
    bool invalid_sqrt = false;
    bool invalid = false;
    bool overflow = false;

    [[nodiscard]] bool any() const { return division_by_zero || invalid_sqrt || invalid || overflow; }
};

// floating: rounding errors of the profile are accounted for.
// real: plain real-arithmetic slopes with outward-rounded endpoints only.
enum class Arith { floating, real };

// best: of the two symmetric slope forms for * and /, keep the one giving the
// narrower enclosure. table: always the standard form.
enum class SlopeForm { best, table };

struct SlopeContext {
    Registry& reg;
    const PrecisionProfile& prof;
    Arith arith = Arith::floating;
    SlopeForm form = SlopeForm::best;
    OpEvents* events = nullptr;
};

// Interval of all values the slope value can take: M + S . (V - mid).
Interval enclosure(const FpsValue& v, const Registry& reg);

// Same, at one point of the independent variables.
Interval enclosure_at(const FpsValue& v, const Registry& reg, const std::vector<long double>& point);

// ([m, m], unit vector at `index`) with m the frozen midpoint of that entry.
FpsValue seed(const Registry& reg, std::size_t index);

// Flush-to-zero and overflow handling.
FpsValue normalize_range(const FpsValue& v, const SlopeContext& ctx);

// g with its contribution removed when it may vanish in a sum with h.
FpsValue absorb(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx);

FpsValue fps_neg(const FpsValue& g);
FpsValue fps_add(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx);
FpsValue fps_sub(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx);
FpsValue fps_mul(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx);
FpsValue fps_div(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx);
FpsValue fps_sqrt(const FpsValue& g, const SlopeContext& ctx);

bool fps_leq(const FpsValue& g, const FpsValue& h);
FpsValue fps_join(const FpsValue& g, const FpsValue& h);
FpsValue fps_widen(const FpsValue& g, const FpsValue& h, const Thresholds& thresholds);

// Where a meet happens; names the fresh independent variable it may create.
struct MeetSite {
    std::string name;
    int step = -1;
    int site = -1;
    bool then_branch = true;
    // Replace the value by its plain interval instead of registering a fresh
    // variable (used during fixpoint iteration so the registry stays finite).
    bool collapse = false;
};

// Empty result means the meet is infeasible.
std::optional<FpsValue> fps_meet(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx,
                                 const MeetSite& site);

// Derivative expansion baseline: f(z), an enclosure of the gradient over the
// input box, and the plain interval evaluation over the box.
struct DerivValue {
    Interval fz = Interval::point(0.0);
    std::vector<Interval> D;
    Interval naive = Interval::point(0.0);

    [[nodiscard]] Interval grad(std::size_t i) const;
};

DerivValue deriv_constant(const Interval& x);
DerivValue deriv_seed(const Registry& reg, std::size_t index);
DerivValue deriv_neg(const DerivValue& g);
DerivValue deriv_add(const DerivValue& g, const DerivValue& h);
DerivValue deriv_sub(const DerivValue& g, const DerivValue& h);
DerivValue deriv_mul(const DerivValue& g, const DerivValue& h);
// Throw DomainError outside the domain.
DerivValue deriv_div(const DerivValue& g, const DerivValue& h);
DerivValue deriv_sqrt(const DerivValue& g);
// Mean-value enclosure f(z) + D . (V - z).
Interval deriv_enclosure(const DerivValue& v, const Registry& reg);

} // namespace fps
