// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/slope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fps/rounding.hpp"

namespace fps {

namespace r = rounding;

namespace {

constexpr double inf = Interval::kInf;
const Interval kZero = Interval::point(0.0);

bool floating(const SlopeContext& ctx) { return ctx.arith == Arith::floating; }

void raise(const SlopeContext& ctx, bool OpEvents::*flag) {
    if (ctx.events != nullptr) {
        ctx.events->*flag = true;
    }
}

// x * (1 + [-u, u])
Interval inflate(const Interval& x, const SlopeContext& ctx) {
    if (!floating(ctx) || x == kZero) {
        return x;
    }
    const double u = ctx.prof.u.up;
    return ivl_mul(x, Interval(r::sub_down(1.0, u), r::add_up(1.0, u)));
}

// x + [-sigma/2, sigma/2], needed only when the exact result may fall below
// the normal range; above it the relative error term alone bounds rounding.
Interval add_abs_error(const Interval& x, const Interval& exact, const SlopeContext& ctx, ArithFlags* flags) {
    if (!floating(ctx) || exact.mig() >= ctx.prof.min_normal.up) {
        return x;
    }
    return ivl_add(x, ctx.prof.abs_error(), flags);
}

std::size_t common_size(const FpsValue& g, const FpsValue& h) { return std::max(g.S.size(), h.S.size()); }

FpsValue join_zero(const FpsValue& v) {
    FpsValue out = v;
    out.M = ivl_join(out.M, kZero);
    for (auto& s : out.S) {
        s = ivl_join(s, kZero);
    }
    return out;
}

FpsValue join_overflow(const FpsValue& v, double side) {
    FpsValue out = v;
    const Interval special = Interval::point(side);
    out.M = ivl_join(out.M, special);
    for (auto& s : out.S) {
        s = ivl_join(s, special);
    }
    return out;
}

FpsValue top_with(const SlopeContext& ctx, bool OpEvents::*flag) {
    raise(ctx, flag);
    return FpsValue::top();
}

// The concrete operation may combine +inf with -inf (or inf with 0).
bool may_add_nan(const Interval& a, const Interval& b) {
    return (a.hi() == inf && b.lo() == -inf) || (a.lo() == -inf && b.hi() == inf);
}

bool may_mul_nan(const Interval& a, const Interval& b) {
    return (!a.is_finite() && b.contains_zero()) || (!b.is_finite() && a.contains_zero());
}

int sign_of(const FpsValue& v, const Interval& iv) {
    if (v.is_pos_overflow()) {
        return 1;
    }
    if (v.is_neg_overflow()) {
        return -1;
    }
    return iv.lo() > 0 ? 1 : -1;
}

FpsValue overflow_of_sign(int sign) { return sign > 0 ? FpsValue::pos_overflow() : FpsValue::neg_overflow(); }

FpsValue finish(FpsValue v, const SlopeContext& ctx, const ArithFlags& flags) {
    if (flags.invalid) {
        return top_with(ctx, &OpEvents::invalid);
    }
    return normalize_range(v, ctx);
}

} // namespace

std::size_t Registry::add(std::string name, const Interval& value, Origin origin) {
    if (value.is_bottom()) {
        throw std::invalid_argument("independent variable '" + name + "' has an empty range");
    }
    const double m = mid_or_fallback(value);
    const Interval offset = ivl_sub(value, Interval::point(m));
    entries_.push_back(Entry{std::move(name), value, m, offset, origin});
    return entries_.size() - 1;
}

std::size_t Registry::add_meet(std::string name, const Interval& value, int step, int site, bool then_branch) {
    const std::size_t i = add(std::move(name), value, Origin::meet);
    entries_[i].step = step;
    entries_[i].site = site;
    entries_[i].then_branch = then_branch;
    return i;
}

Interval FpsValue::slope(std::size_t i) const {
    if (i < S.size()) {
        return S[i];
    }
    if (is_pos_overflow()) {
        return Interval::point(inf);
    }
    if (is_neg_overflow()) {
        return Interval::point(-inf);
    }
    return kZero;
}

bool FpsValue::operator==(const FpsValue& other) const {
    if (!(M == other.M)) {
        return false;
    }
    const std::size_t n = std::max(S.size(), other.S.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(slope(i) == other.slope(i))) {
            return false;
        }
    }
    return true;
}

std::string to_string(const FpsValue& v) {
    std::ostringstream os;
    os << "(" << v.M << ", <";
    for (std::size_t i = 0; i < v.S.size(); ++i) {
        os << (i ? ", " : "") << v.S[i];
    }
    os << ">)";
    return os.str();
}

Interval enclosure(const FpsValue& v, const Registry& reg) {
    if (v.is_pos_overflow() || v.is_neg_overflow()) {
        return v.M;
    }
    if (v.S.size() > reg.size()) {
        throw std::logic_error("slope vector longer than the registry");
    }
    ArithFlags flags;
    Interval acc = v.M;
    for (std::size_t i = 0; i < v.S.size(); ++i) {
        if (v.S[i] == kZero) {
            continue;
        }
        acc = ivl_add(acc, ivl_mul(v.S[i], reg[i].offset), &flags);
    }
    return flags.invalid ? Interval::top() : acc;
}

Interval enclosure_at(const FpsValue& v, const Registry& reg, const std::vector<long double>& point) {
    if (v.is_pos_overflow() || v.is_neg_overflow()) {
        return v.M;
    }
    ArithFlags flags;
    Interval acc = v.M;
    for (std::size_t i = 0; i < v.S.size(); ++i) {
        if (v.S[i] == kZero) {
            continue;
        }
        // Sterbenz makes a zero difference exact; otherwise one binary64 ulp
        // on each side covers both roundings.
        const long double d = point.at(i) - static_cast<long double>(reg[i].mid);
        Interval offset = kZero;
        if (d != 0) {
            const double dd = static_cast<double>(d);
            offset = std::isinf(dd) ? Interval::point(dd) : Interval(r::next_down(dd), r::next_up(dd));
        }
        acc = ivl_add(acc, ivl_mul(v.S[i], offset), &flags);
    }
    return flags.invalid ? Interval::top() : acc;
}

FpsValue seed(const Registry& reg, std::size_t index) {
    FpsValue v{Interval::point(reg[index].mid), std::vector<Interval>(index + 1, kZero)};
    v.S[index] = Interval::point(1.0);
    return v;
}

FpsValue normalize_range(const FpsValue& v, const SlopeContext& ctx) {
    if (!floating(ctx) || v.is_overflow()) {
        return v;
    }
    const Interval iv = enclosure(v, ctx.reg);
    const double hs_down = ctx.prof.half_sigma.down;
    const double hs_up = ctx.prof.half_sigma.up;
    if (-hs_down <= iv.lo() && iv.hi() <= hs_down) {
        return FpsValue::constant(kZero);
    }
    if (iv.lo() > ctx.prof.Sigma.up) {
        raise(ctx, &OpEvents::overflow);
        return FpsValue::pos_overflow();
    }
    if (iv.hi() < -ctx.prof.Sigma.up) {
        raise(ctx, &OpEvents::overflow);
        return FpsValue::neg_overflow();
    }
    FpsValue out = v;
    if (iv.lo() <= hs_up && iv.hi() >= -hs_up) {
        out = join_zero(out);
    }
    if (iv.hi() > ctx.prof.Sigma.down) {
        raise(ctx, &OpEvents::overflow);
        out = join_overflow(out, inf);
    }
    if (iv.lo() < -ctx.prof.Sigma.down) {
        raise(ctx, &OpEvents::overflow);
        out = join_overflow(out, -inf);
    }
    return out;
}

FpsValue absorb(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    if (!floating(ctx) || g.is_overflow() || h.is_overflow()) {
        return g;
    }
    const Interval ig = enclosure(g, ctx.reg);
    const Interval ih = enclosure(h, ctx.reg);
    if (!ih.contains_zero()) {
        // Half of u: at exactly u|h| the sum can still move h by one ulp.
        const double total = r::mul_down(ctx.prof.u.halved().down, ih.mig());
        if (ig.mag() <= total) {
            return FpsValue::constant(kZero);
        }
    }
    const double partial = r::mul_up(ctx.prof.u.up, ih.mag());
    if (ig.mig() <= partial) {
        return join_zero(g);
    }
    return g;
}

FpsValue fps_neg(const FpsValue& g) {
    FpsValue out{ivl_neg(g.M), {}};
    out.S.reserve(g.S.size());
    for (const auto& s : g.S) {
        out.S.push_back(ivl_neg(s));
    }
    return out;
}

FpsValue fps_add(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    const Interval ig = enclosure(g, ctx.reg);
    const Interval ih = enclosure(h, ctx.reg);
    if (may_add_nan(ig, ih)) {
        return top_with(ctx, &OpEvents::invalid);
    }
    if (g.is_pos_overflow() || h.is_pos_overflow()) {
        return FpsValue::pos_overflow();
    }
    if (g.is_neg_overflow() || h.is_neg_overflow()) {
        return FpsValue::neg_overflow();
    }
    const FpsValue gt = absorb(g, h, ctx);
    const FpsValue ht = absorb(h, g, ctx);
    ArithFlags flags;
    FpsValue out{inflate(ivl_add(gt.M, ht.M, &flags), ctx), {}};
    const std::size_t n = common_size(gt, ht);
    out.S.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.S.push_back(inflate(ivl_add(gt.slope(i), ht.slope(i), &flags), ctx));
    }
    return finish(std::move(out), ctx, flags);
}

FpsValue fps_sub(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    return fps_add(g, fps_neg(h), ctx);
}

FpsValue fps_mul(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    const Interval ig = enclosure(g, ctx.reg);
    const Interval ih = enclosure(h, ctx.reg);
    if (may_mul_nan(ig, ih)) {
        return top_with(ctx, &OpEvents::invalid);
    }
    if (g.is_overflow() || h.is_overflow()) {
        return overflow_of_sign(sign_of(g, ig) * sign_of(h, ih));
    }
    ArithFlags flags;
    const Interval prod = ivl_mul(g.M, h.M);
    const Interval M = add_abs_error(inflate(prod, ctx), prod, ctx, &flags);
    const std::size_t n = common_size(g, h);
    FpsValue a{M, {}};
    FpsValue b{M, {}};
    a.S.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.S.push_back(inflate(ivl_add(ivl_mul(g.slope(i), ih), ivl_mul(g.M, h.slope(i)), &flags), ctx));
    }
    if (ctx.form == SlopeForm::best) {
        b.S.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            b.S.push_back(inflate(ivl_add(ivl_mul(h.slope(i), ig), ivl_mul(h.M, g.slope(i)), &flags), ctx));
        }
        if (!flags.invalid && enclosure(b, ctx.reg).width() < enclosure(a, ctx.reg).width()) {
            return finish(std::move(b), ctx, flags);
        }
    }
    return finish(std::move(a), ctx, flags);
}

FpsValue fps_div(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx) {
    const Interval ig = enclosure(g, ctx.reg);
    const Interval ih = enclosure(h, ctx.reg);
    if (ih.contains_zero() || h.M.contains_zero()) {
        return top_with(ctx, &OpEvents::division_by_zero);
    }
    if (!ig.is_finite() && !ih.is_finite()) {
        return top_with(ctx, &OpEvents::invalid);
    }
    if (g.is_overflow()) {
        return overflow_of_sign(sign_of(g, ig) * sign_of(h, ih));
    }
    if (h.is_overflow()) {
        return FpsValue::constant(kZero);
    }
    ArithFlags flags;
    const Interval q = ivl_div(g.M, h.M, &flags);
    const Interval M = add_abs_error(inflate(q, ctx), q, ctx, &flags);
    const std::size_t n = common_size(g, h);
    FpsValue a{M, {}};
    a.S.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Interval num = ivl_sub(g.slope(i), ivl_mul(h.slope(i), q), &flags);
        a.S.push_back(inflate(ivl_div(num, ih, &flags), ctx));
    }
    if (ctx.form == SlopeForm::best) {
        const Interval ratio = ivl_div(ig, ih, &flags);
        FpsValue b{M, {}};
        b.S.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Interval num = ivl_sub(g.slope(i), ivl_mul(h.slope(i), ratio), &flags);
            b.S.push_back(inflate(ivl_div(num, h.M, &flags), ctx));
        }
        if (!flags.invalid && enclosure(b, ctx.reg).width() < enclosure(a, ctx.reg).width()) {
            return finish(std::move(b), ctx, flags);
        }
    }
    return finish(std::move(a), ctx, flags);
}

FpsValue fps_sqrt(const FpsValue& g, const SlopeContext& ctx) {
    if (g.is_pos_overflow()) {
        return g;
    }
    const Interval ig = enclosure(g, ctx.reg);
    if (ig.lo() < 0) {
        return top_with(ctx, &OpEvents::invalid_sqrt);
    }
    ArithFlags flags;
    if (ig.lo() == 0) {
        // No positive lower bound for the slope denominator: plain interval.
        const Interval root = ivl_sqrt(ig);
        const Interval M = add_abs_error(inflate(root, ctx), root, ctx, &flags);
        return finish(FpsValue::constant(M), ctx, flags);
    }
    const Interval root_m = ivl_sqrt(g.M);
    const Interval M = add_abs_error(inflate(root_m, ctx), root_m, ctx, &flags);
    const Interval denom = ivl_add(root_m, ivl_sqrt(ig), &flags);
    FpsValue out{M, {}};
    out.S.reserve(g.S.size());
    for (const auto& s : g.S) {
        out.S.push_back(inflate(ivl_div(s, denom, &flags), ctx));
    }
    return finish(std::move(out), ctx, flags);
}

bool fps_leq(const FpsValue& g, const FpsValue& h) {
    if (!ivl_leq(g.M, h.M)) {
        return false;
    }
    const std::size_t n = common_size(g, h);
    for (std::size_t i = 0; i < n; ++i) {
        if (!ivl_leq(g.slope(i), h.slope(i))) {
            return false;
        }
    }
    return true;
}

FpsValue fps_join(const FpsValue& g, const FpsValue& h) {
    FpsValue out{ivl_join(g.M, h.M), {}};
    const std::size_t n = common_size(g, h);
    out.S.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.S.push_back(ivl_join(g.slope(i), h.slope(i)));
    }
    return out;
}

FpsValue fps_widen(const FpsValue& g, const FpsValue& h, const Thresholds& thresholds) {
    FpsValue out{ivl_widen(g.M, h.M, thresholds), {}};
    const std::size_t n = common_size(g, h);
    out.S.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.S.push_back(ivl_widen(g.slope(i), h.slope(i), thresholds));
    }
    return out;
}

std::optional<FpsValue> fps_meet(const FpsValue& g, const FpsValue& h, const SlopeContext& ctx,
                                 const MeetSite& site) {
    const Interval ig = enclosure(g, ctx.reg);
    const Interval ih = enclosure(h, ctx.reg);
    const Interval both = ivl_meet(ig, ih);
    if (both.is_bottom()) {
        return std::nullopt;
    }
    if (ivl_leq(ig, ih)) {
        return g;
    }
    if (ivl_leq(ih, ig)) {
        return h;
    }
    if (site.collapse) {
        return FpsValue::constant(both);
    }
    const std::size_t index = ctx.reg.add_meet(site.name, both, site.step, site.site, site.then_branch);
    return seed(ctx.reg, index);
}

Interval DerivValue::grad(std::size_t i) const { return i < D.size() ? D[i] : kZero; }

DerivValue deriv_constant(const Interval& x) { return {x, {}, x}; }

DerivValue deriv_seed(const Registry& reg, std::size_t index) {
    DerivValue v{Interval::point(reg[index].mid), std::vector<Interval>(index + 1, kZero), reg[index].value};
    v.D[index] = Interval::point(1.0);
    return v;
}

DerivValue deriv_neg(const DerivValue& g) {
    DerivValue out{ivl_neg(g.fz), {}, ivl_neg(g.naive)};
    for (const auto& d : g.D) {
        out.D.push_back(ivl_neg(d));
    }
    return out;
}

DerivValue deriv_add(const DerivValue& g, const DerivValue& h) {
    DerivValue out{ivl_add(g.fz, h.fz), {}, ivl_add(g.naive, h.naive)};
    const std::size_t n = std::max(g.D.size(), h.D.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.D.push_back(ivl_add(g.grad(i), h.grad(i)));
    }
    return out;
}

DerivValue deriv_sub(const DerivValue& g, const DerivValue& h) { return deriv_add(g, deriv_neg(h)); }

DerivValue deriv_mul(const DerivValue& g, const DerivValue& h) {
    DerivValue out{ivl_mul(g.fz, h.fz), {}, ivl_mul(g.naive, h.naive)};
    const std::size_t n = std::max(g.D.size(), h.D.size());
    for (std::size_t i = 0; i < n; ++i) {
        out.D.push_back(ivl_add(ivl_mul(g.grad(i), h.naive), ivl_mul(g.naive, h.grad(i))));
    }
    return out;
}

DerivValue deriv_div(const DerivValue& g, const DerivValue& h) {
    DerivValue out{ivl_div(g.fz, h.fz), {}, ivl_div(g.naive, h.naive)};
    const std::size_t n = std::max(g.D.size(), h.D.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Interval num = ivl_sub(g.grad(i), ivl_mul(h.grad(i), out.naive));
        out.D.push_back(ivl_div(num, h.naive));
    }
    return out;
}

DerivValue deriv_sqrt(const DerivValue& g) {
    if (!(g.naive.lo() > 0)) {
        throw DomainError("derivative of the square root at a point not above zero");
    }
    const Interval root = ivl_sqrt(g.naive);
    DerivValue out{ivl_sqrt(g.fz), {}, root};
    const Interval denom = ivl_mul(Interval::point(2.0), root);
    for (const auto& d : g.D) {
        out.D.push_back(ivl_div(d, denom));
    }
    return out;
}

Interval deriv_enclosure(const DerivValue& v, const Registry& reg) {
    Interval acc = v.fz;
    for (std::size_t i = 0; i < v.D.size(); ++i) {
        acc = ivl_add(acc, ivl_mul(v.D[i], reg[i].offset));
    }
    return acc;
}

} // namespace fps
