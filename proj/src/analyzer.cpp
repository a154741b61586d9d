// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "fps/rounding.hpp"

namespace fps {

namespace r = rounding;

namespace {

constexpr double inf = Interval::kInf;

// ---------------------------------------------------------------------------
// Domains. Each provides the value type and the transfer functions the engine
// needs; events report possible run-time errors.

class SlopeDomain {
  public:
    using Value = FpsValue;

    SlopeDomain(Registry& reg, Precision kind, Arith arith, SlopeForm form)
        : reg_(reg), kind_(kind), prof_(profile(kind)), arith_(arith), form_(form) {}

    [[nodiscard]] Value literal(const std::string& text) const {
        return FpsValue::constant(arith_ == Arith::real ? real_literal_interval(text) : literal_interval(kind_, text));
    }
    [[nodiscard]] Value input(std::size_t index) const { return seed(reg_, index); }

    Value neg(const Value& a) const { return fps_neg(a); }
    Value add(const Value& a, const Value& b, OpEvents& ev) const { return fps_add(a, b, ctx(ev)); }
    Value sub(const Value& a, const Value& b, OpEvents& ev) const { return fps_sub(a, b, ctx(ev)); }
    Value mul(const Value& a, const Value& b, OpEvents& ev) const { return fps_mul(a, b, ctx(ev)); }
    Value div(const Value& a, const Value& b, OpEvents& ev) const { return fps_div(a, b, ctx(ev)); }
    Value sqrt(const Value& a, OpEvents& ev) const { return fps_sqrt(a, ctx(ev)); }

    [[nodiscard]] Interval bound(const Value& v) const { return enclosure(v, reg_); }
    [[nodiscard]] Value join(const Value& a, const Value& b) const { return fps_join(a, b); }
    [[nodiscard]] Value widen(const Value& a, const Value& b, const Thresholds& t) const { return fps_widen(a, b, t); }
    [[nodiscard]] bool leq(const Value& a, const Value& b) const { return fps_leq(a, b); }

    std::optional<Value> meet(const Value& g, const Interval& cond, const MeetSite& site) const {
        OpEvents ev;
        return fps_meet(g, FpsValue::constant(cond), ctx(ev), site);
    }

  private:
    SlopeContext ctx(OpEvents& ev) const { return SlopeContext{reg_, prof_, arith_, form_, &ev}; }

    Registry& reg_;
    Precision kind_;
    const PrecisionProfile& prof_;
    Arith arith_;
    SlopeForm form_;
};

// Plain intervals. A bound that is exact and a value of the format is kept;
// any other bound is widened by the relative error (and the absolute one
// below the normal range) and rounded outward to the format's grid.
class IntervalDomain {
  public:
    using Value = Interval;

    IntervalDomain(Registry& reg, Precision kind) : reg_(reg), kind_(kind), prof_(profile(kind)) {}

    [[nodiscard]] Value literal(const std::string& text) const { return literal_interval(kind_, text); }
    [[nodiscard]] Value input(std::size_t index) const { return reg_[index].value; }

    Value neg(const Value& a) const { return ivl_neg(a); }

    Value add(const Value& a, const Value& b, OpEvents& ev) const {
        if ((a.hi() == inf && b.lo() == -inf) || (a.lo() == -inf && b.hi() == inf)) {
            ev.invalid = true;
            return Interval::top();
        }
        const Bound lo{r::add_down(a.lo(), b.lo()), r::add_up(a.lo(), b.lo())};
        const Bound hi{r::add_down(a.hi(), b.hi()), r::add_up(a.hi(), b.hi())};
        return finish(lo, hi, false, ev);
    }

    Value sub(const Value& a, const Value& b, OpEvents& ev) const { return add(a, ivl_neg(b), ev); }

    Value mul(const Value& a, const Value& b, OpEvents& ev) const {
        if ((!a.is_finite() && b.contains_zero()) || (!b.is_finite() && a.contains_zero())) {
            ev.invalid = true;
            return Interval::top();
        }
        const double xs[] = {a.lo(), a.hi()};
        const double ys[] = {b.lo(), b.hi()};
        Bound lo{inf, inf};
        Bound hi{-inf, -inf};
        for (double x : xs) {
            for (double y : ys) {
                lo.down = std::min(lo.down, r::mul_down(x, y));
                lo.up = std::min(lo.up, r::mul_up(x, y));
                hi.down = std::max(hi.down, r::mul_down(x, y));
                hi.up = std::max(hi.up, r::mul_up(x, y));
            }
        }
        return finish(lo, hi, true, ev);
    }

    Value div(const Value& a, const Value& b, OpEvents& ev) const {
        if (b.contains_zero()) {
            ev.division_by_zero = true;
            return Interval::top();
        }
        if (!a.is_finite() && !b.is_finite()) {
            ev.invalid = true;
            return Interval::top();
        }
        const double xs[] = {a.lo(), a.hi()};
        const double ys[] = {b.lo(), b.hi()};
        Bound lo{inf, inf};
        Bound hi{-inf, -inf};
        for (double x : xs) {
            for (double y : ys) {
                lo.down = std::min(lo.down, r::div_down(x, y));
                lo.up = std::min(lo.up, r::div_up(x, y));
                hi.down = std::max(hi.down, r::div_down(x, y));
                hi.up = std::max(hi.up, r::div_up(x, y));
            }
        }
        return finish(lo, hi, true, ev);
    }

    Value sqrt(const Value& a, OpEvents& ev) const {
        if (a.lo() < 0) {
            ev.invalid_sqrt = true;
            return Interval::top();
        }
        const Bound lo{r::sqrt_down(a.lo()), r::sqrt_up(a.lo())};
        const Bound hi{r::sqrt_down(a.hi()), r::sqrt_up(a.hi())};
        return finish(lo, hi, true, ev);
    }

    [[nodiscard]] Interval bound(const Value& v) const { return v; }
    [[nodiscard]] Value join(const Value& a, const Value& b) const { return ivl_join(a, b); }
    [[nodiscard]] Value widen(const Value& a, const Value& b, const Thresholds& t) const { return ivl_widen(a, b, t); }
    [[nodiscard]] bool leq(const Value& a, const Value& b) const { return ivl_leq(a, b); }

    std::optional<Value> meet(const Value& g, const Interval& cond, const MeetSite&) const {
        const Interval m = ivl_meet(g, cond);
        if (m.is_bottom()) {
            return std::nullopt;
        }
        return m;
    }

  private:
    // Enclosure [down, up] of an exact real bound.
    struct Bound {
        double down;
        double up;
    };

    [[nodiscard]] bool needs_abs(const Bound& b) const {
        const double mig = (b.down <= 0 && b.up >= 0) ? 0.0 : std::min(std::fabs(b.down), std::fabs(b.up));
        return mig < prof_.min_normal.up;
    }

    [[nodiscard]] double grid_down(double x) const {
        if (kind_ != Precision::single || std::isinf(x)) {
            return x;
        }
        float f = static_cast<float>(x);
        if (static_cast<double>(f) > x) {
            f = std::nextafter(f, -std::numeric_limits<float>::infinity());
        }
        return f;
    }

    [[nodiscard]] double grid_up(double x) const {
        if (kind_ != Precision::single || std::isinf(x)) {
            return x;
        }
        float f = static_cast<float>(x);
        if (static_cast<double>(f) < x) {
            f = std::nextafter(f, std::numeric_limits<float>::infinity());
        }
        return f;
    }

    [[nodiscard]] double round_lo(const Bound& b, bool abs_term) const {
        if ((b.down == b.up && representable(kind_, b.down)) || std::isinf(b.down)) {
            return b.down;
        }
        const double u = prof_.u.up;
        double x = b.down >= 0 ? r::mul_down(b.down, r::sub_down(1.0, u)) : r::mul_down(b.down, r::add_up(1.0, u));
        if (abs_term && needs_abs(b)) {
            x = r::sub_down(x, prof_.half_sigma.up);
        }
        return grid_down(x);
    }

    [[nodiscard]] double round_hi(const Bound& b, bool abs_term) const {
        if ((b.down == b.up && representable(kind_, b.up)) || std::isinf(b.up)) {
            return b.up;
        }
        const double u = prof_.u.up;
        double x = b.up >= 0 ? r::mul_up(b.up, r::add_up(1.0, u)) : r::mul_up(b.up, r::sub_down(1.0, u));
        if (abs_term && needs_abs(b)) {
            x = r::add_up(x, prof_.half_sigma.up);
        }
        return grid_up(x);
    }

    Value finish(const Bound& lo, const Bound& hi, bool abs_term, OpEvents& ev) const {
        const double a = round_lo(lo, abs_term);
        const double b = round_hi(hi, abs_term);
        if (b > prof_.Sigma.down || a < -prof_.Sigma.down) {
            ev.overflow = true;
        }
        return Interval(a, b);
    }

    Registry& reg_;
    Precision kind_;
    const PrecisionProfile& prof_;
};

// ---------------------------------------------------------------------------

template <class V>
struct Env {
    std::map<std::string, V> vals;
    bool bottom = false;
};

std::string guard_var(int site) { return "guard#" + std::to_string(site); }

template <class D>
class Engine {
  public:
    using V = typename D::Value;

    Engine(const Program& p, const AnalyzerOptions& opts, Analysis<V>& out, D& dom)
        : p_(p), opts_(opts), out_(out), dom_(dom), thresholds_(opts.thresholds ? *opts.thresholds
                                                                            : profile(out.precision).default_thresholds()) {}

    void run() {
        const auto names = variable_names(p_);
        std::map<std::string, std::size_t> slot;
        for (const auto& n : names) {
            VarResult<V> vr;
            vr.name = n;
            vr.role = VarRole::computed;
            slot[n] = out_.vars.size();
            out_.vars.push_back(std::move(vr));
        }
        for (const auto& in : p_.inputs) {
            const Interval range = input_interval(out_.precision, in.lo, in.hi);
            if (range.is_bottom()) {
                throw ProgramError("input '" + in.name + "' has no value of the format in [" + in.lo + ", " + in.hi +
                                   "]");
            }
            input_index_.push_back(out_.registry.add(in.name, range, Registry::Origin::input));
            out_.vars[slot[in.name]].role = VarRole::input;
        }
        std::map<std::string, V> states;
        for (const auto& s : p_.states) {
            const std::size_t idx =
                out_.registry.add(s.name, literal_interval(out_.precision, s.init), Registry::Origin::state);
            states.insert_or_assign(s.name, dom_.input(idx));
            out_.vars[slot[s.name]].role = VarRole::state;
        }
        for (const auto& o : p_.outputs) {
            out_.vars[slot[o]].output = true;
        }
        for (auto& vr : out_.vars) {
            vr.steps.resize(static_cast<std::size_t>(out_.unroll));
        }

        for (int t = 0; t < out_.unroll; ++t) {
            Env<V> env = step(states, t, Phase::unroll);
            record(env, slot, [t](VarResult<V>& vr) -> std::optional<V>& { return vr.steps[static_cast<std::size_t>(t)]; });
            states = next_states(env);
        }
        if (opts_.fixpoint) {
            fixpoint(states, slot);
        }
    }

  private:
    template <class Slot>
    void record(const Env<V>& env, const std::map<std::string, std::size_t>& slot, Slot where) {
        for (const auto& [name, v] : env.vals) {
            auto it = slot.find(name);
            if (it != slot.end()) {
                where(out_.vars[it->second]) = v;
            }
        }
    }

    std::map<std::string, V> next_states(const Env<V>& env) const {
        std::map<std::string, V> next;
        for (const auto& s : p_.states) {
            next.insert_or_assign(s.name, env.vals.at(s.source));
        }
        return next;
    }

    Env<V> step(const std::map<std::string, V>& states, int t, Phase phase) {
        Env<V> env;
        for (std::size_t i = 0; i < p_.inputs.size(); ++i) {
            env.vals.insert_or_assign(p_.inputs[i].name, dom_.input(input_index_[i]));
        }
        for (const auto& [name, v] : states) {
            env.vals.insert_or_assign(name, v);
        }
        return exec(p_.body, std::move(env), t, phase);
    }

    void fixpoint(std::map<std::string, V> x, const std::map<std::string, std::size_t>& slot) {
        out_.fixpoint_run = true;
        for (int k = 0; k < opts_.max_iterations; ++k) {
            Env<V> env = step(x, -1, Phase::fixpoint);
            const auto y = next_states(env);
            ++out_.iterations;
            bool stable = true;
            for (const auto& [name, v] : y) {
                if (!dom_.leq(v, x.at(name))) {
                    stable = false;
                    break;
                }
            }
            if (stable) {
                out_.converged = true;
                record(env, slot, [](VarResult<V>& vr) -> std::optional<V>& { return vr.limit; });
                return;
            }
            for (auto& [name, v] : x) {
                const V joined = dom_.join(v, y.at(name));
                v = k < opts_.widen_delay ? joined : dom_.widen(v, joined, thresholds_);
            }
        }
        // Give up on the states: everything is possible.
        out_.diagnostics.add(DiagKind::fixpoint_cap, "", Phase::fixpoint, -1,
                             "fixpoint iteration reached the cap of " + std::to_string(opts_.max_iterations) +
                                 "; states set to top");
        for (auto& [name, v] : x) {
            v = top_value();
        }
        Env<V> env = step(x, -1, Phase::fixpoint);
        record(env, slot, [](VarResult<V>& vr) -> std::optional<V>& { return vr.limit; });
    }

    V top_value() const {
        if constexpr (std::is_same_v<V, Interval>) {
            return Interval::top();
        } else {
            return FpsValue::top();
        }
    }

    void report(const OpEvents& ev, const std::string& var, int t, Phase phase) {
        if (ev.division_by_zero) {
            out_.diagnostics.add(DiagKind::division_by_zero, var, phase, t, "possible division by zero in '" + var + "'");
        }
        if (ev.invalid_sqrt) {
            out_.diagnostics.add(DiagKind::invalid_sqrt, var, phase, t,
                                 "possible square root of a negative value in '" + var + "'");
        }
        if (ev.invalid) {
            out_.diagnostics.add(DiagKind::invalid, var, phase, t, "possible invalid operation (NaN) in '" + var + "'");
        }
        if (ev.overflow) {
            out_.diagnostics.add(DiagKind::overflow, var, phase, t, "possible overflow in '" + var + "'");
        }
    }

    V eval(const Expr& e, const Env<V>& env, OpEvents& ev) {
        switch (e.op) {
        case Expr::Op::literal: return dom_.literal(e.text);
        case Expr::Op::var: {
            auto it = env.vals.find(e.text);
            if (it == env.vals.end()) {
                throw AnalysisError("variable '" + e.text + "' has no value");
            }
            return it->second;
        }
        case Expr::Op::neg: return dom_.neg(eval(*e.args[0], env, ev));
        case Expr::Op::sqrt: return dom_.sqrt(eval(*e.args[0], env, ev), ev);
        default: break;
        }
        const V a = eval(*e.args[0], env, ev);
        const V b = eval(*e.args[1], env, ev);
        switch (e.op) {
        case Expr::Op::add: return dom_.add(a, b, ev);
        case Expr::Op::sub: return dom_.sub(a, b, ev);
        case Expr::Op::mul: return dom_.mul(a, b, ev);
        case Expr::Op::div: return dom_.div(a, b, ev);
        default: break;
        }
        throw AnalysisError("unknown expression");
    }

    // Branch environment under `lhs cmp c` (then) or its negation (else).
    Env<V> refine(const Env<V>& env, const Instr& g, const V& lhs, bool then_branch, int t, Phase phase) {
        const Interval c = literal_interval(out_.precision, g.constant);
        // Largest concrete value below x: the binary64 grid contains the
        // single and double grids, not the extended one.
        auto below = [&](double x) { return out_.precision == Precision::extended ? x : r::next_down(x); };
        auto above = [&](double x) { return out_.precision == Precision::extended ? x : r::next_up(x); };
        Env<V> res = env;
        std::optional<Interval> cond;
        switch (g.cmp) {
        case Cmp::ge: cond = then_branch ? Interval(c.lo(), inf) : Interval(-inf, below(c.hi())); break;
        case Cmp::gt: cond = then_branch ? Interval(above(c.lo()), inf) : Interval(-inf, c.hi()); break;
        case Cmp::ne:
            if (then_branch) {
                const Interval b = dom_.bound(lhs);
                if (c.is_point() && b.is_point() && b.lo() == c.lo()) {
                    res.bottom = true;
                }
                return res;
            }
            cond = c;
            break;
        }
        if (cond->lo() > cond->hi()) {
            res.bottom = true;
            return res;
        }
        const Interval target(cond->lo(), cond->hi());
        if (g.expr->op != Expr::Op::var) {
            if (ivl_meet(dom_.bound(lhs), target).is_bottom()) {
                res.bottom = true;
            } else {
                out_.diagnostics.add(DiagKind::guard_precision, guard_var(g.site), phase, t,
                                     "guard on a compound expression at site " + std::to_string(g.site) +
                                         " does not refine any variable");
            }
            return res;
        }
        MeetSite site;
        site.name = g.expr->text + "@" + std::to_string(t) + "#" + std::to_string(g.site) + (then_branch ? "T" : "F");
        site.step = t;
        site.site = g.site;
        site.then_branch = then_branch;
        site.collapse = phase == Phase::fixpoint;
        auto m = dom_.meet(lhs, target, site);
        if (!m) {
            res.bottom = true;
        } else {
            res.vals.insert_or_assign(g.expr->text, *m);
        }
        return res;
    }

    Env<V> join(const Env<V>& a, const Env<V>& b) const {
        if (a.bottom) {
            return b;
        }
        if (b.bottom) {
            return a;
        }
        Env<V> out = a;
        for (const auto& [name, v] : b.vals) {
            auto it = out.vals.find(name);
            if (it == out.vals.end()) {
                out.vals.insert_or_assign(name, v);
            } else {
                it->second = dom_.join(it->second, v);
            }
        }
        return out;
    }

    Env<V> exec(const std::vector<Instr>& body, Env<V> env, int t, Phase phase) {
        for (const auto& i : body) {
            if (env.bottom) {
                return env;
            }
            if (i.kind == Instr::Kind::assign) {
                OpEvents ev;
                V v = eval(*i.expr, env, ev);
                report(ev, i.var, t, phase);
                env.vals.insert_or_assign(i.var, std::move(v));
                continue;
            }
            OpEvents ev;
            const V lhs = eval(*i.expr, env, ev);
            report(ev, guard_var(i.site), t, phase);
            Env<V> a = refine(env, i, lhs, true, t, phase);
            Env<V> b = refine(env, i, lhs, false, t, phase);
            if (!a.bottom) {
                a = exec(i.then_body, std::move(a), t, phase);
            }
            if (!b.bottom) {
                b = exec(i.else_body, std::move(b), t, phase);
            }
            env = join(a, b);
        }
        return env;
    }

    const Program& p_;
    const AnalyzerOptions& opts_;
    Analysis<V>& out_;
    D& dom_;
    Thresholds thresholds_;
    std::vector<std::size_t> input_index_;
};

template <class V>
void prepare(Analysis<V>& a, const Program& p, const AnalyzerOptions& opts, DomainKind kind) {
    validate(p);
    a.precision = opts.precision.value_or(p.precision);
    a.domain = kind;
    a.unroll = opts.unroll.value_or(p.steps);
    if (a.unroll < 0) {
        throw ProgramError("the unroll count must not be negative");
    }
}

template <class V>
Report to_report(const Analysis<V>& a, const Registry& reg) {
    Report r;
    r.precision = a.precision;
    r.domain = a.domain;
    r.unroll = a.unroll;
    r.fixpoint_run = a.fixpoint_run;
    r.iterations = a.iterations;
    r.converged = a.converged;
    r.registry = reg.entries();
    r.diagnostics = a.diagnostics;
    auto bound = [&](const V& v) {
        if constexpr (std::is_same_v<V, Interval>) {
            return v;
        } else {
            return enclosure(v, reg);
        }
    };
    for (const auto& vr : a.vars) {
        VarBounds b;
        b.name = vr.name;
        b.role = vr.role;
        b.output = vr.output;
        for (const auto& s : vr.steps) {
            b.steps.push_back(s ? std::optional<Interval>(bound(*s)) : std::nullopt);
        }
        if (vr.limit) {
            b.limit = bound(*vr.limit);
        }
        r.vars.push_back(std::move(b));
    }
    return r;
}

template <class D>
class Evaluator {
  public:
    explicit Evaluator(Registry& reg) : dom_(reg, Precision::double_, Arith::real, SlopeForm::table) {}

    FpsValue eval(const Expr& e, const std::map<std::string, FpsValue>& env) {
        OpEvents ev;
        FpsValue v = go(e, env, ev);
        if (ev.division_by_zero || ev.invalid_sqrt || ev.invalid) {
            throw DomainError("expression leaves the domain of its operations");
        }
        return v;
    }

  private:
    FpsValue go(const Expr& e, const std::map<std::string, FpsValue>& env, OpEvents& ev) {
        switch (e.op) {
        case Expr::Op::literal: return dom_.literal(e.text);
        case Expr::Op::var: {
            auto it = env.find(e.text);
            if (it == env.end()) {
                throw AnalysisError("variable '" + e.text + "' has no value");
            }
            return it->second;
        }
        case Expr::Op::neg: return dom_.neg(go(*e.args[0], env, ev));
        case Expr::Op::sqrt: return dom_.sqrt(go(*e.args[0], env, ev), ev);
        case Expr::Op::add: return dom_.add(go(*e.args[0], env, ev), go(*e.args[1], env, ev), ev);
        case Expr::Op::sub: return dom_.sub(go(*e.args[0], env, ev), go(*e.args[1], env, ev), ev);
        case Expr::Op::mul: return dom_.mul(go(*e.args[0], env, ev), go(*e.args[1], env, ev), ev);
        case Expr::Op::div: return dom_.div(go(*e.args[0], env, ev), go(*e.args[1], env, ev), ev);
        }
        throw AnalysisError("unknown expression");
    }

    D dom_;
};

} // namespace

const char* domain_name(DomainKind d) {
    switch (d) {
    case DomainKind::fps: return "fps";
    case DomainKind::real_slope: return "real-slope";
    case DomainKind::interval: return "interval";
    }
    return "?";
}

std::optional<DomainKind> parse_domain(std::string_view name) {
    for (DomainKind d : {DomainKind::fps, DomainKind::real_slope, DomainKind::interval}) {
        if (name == domain_name(d)) {
            return d;
        }
    }
    return std::nullopt;
}

const char* role_name(VarRole r) {
    switch (r) {
    case VarRole::input: return "input";
    case VarRole::state: return "state";
    case VarRole::computed: return "computed";
    }
    return "?";
}

Analysis<FpsValue> analyze_slopes(const Program& p, const AnalyzerOptions& opts, DomainKind kind) {
    if (kind == DomainKind::interval) {
        throw std::invalid_argument("analyze_slopes runs the slope domains only");
    }
    Analysis<FpsValue> a;
    prepare(a, p, opts, kind);
    const bool real = kind == DomainKind::real_slope;
    SlopeDomain dom(a.registry, a.precision, real ? Arith::real : Arith::floating,
                    real ? SlopeForm::table : SlopeForm::best);
    Engine<SlopeDomain> engine(p, opts, a, dom);
    engine.run();
    return a;
}

Analysis<Interval> analyze_intervals(const Program& p, const AnalyzerOptions& opts) {
    Analysis<Interval> a;
    prepare(a, p, opts, DomainKind::interval);
    IntervalDomain dom(a.registry, a.precision);
    Engine<IntervalDomain> engine(p, opts, a, dom);
    engine.run();
    return a;
}

Interval VarBounds::unrolled_hull() const {
    Interval h = Interval::bottom();
    for (const auto& s : steps) {
        if (s) {
            h = ivl_join(h, *s);
        }
    }
    return h;
}

const VarBounds* Report::find(const std::string& name) const {
    for (const auto& v : vars) {
        if (v.name == name) {
            return &v;
        }
    }
    return nullptr;
}

Report make_report(const Analysis<FpsValue>& a) { return to_report(a, a.registry); }
Report make_report(const Analysis<Interval>& a) { return to_report(a, a.registry); }

Report analyze(const Program& p, const AnalyzerOptions& opts, DomainKind kind) {
    if (kind == DomainKind::interval) {
        return make_report(analyze_intervals(p, opts));
    }
    return make_report(analyze_slopes(p, opts, kind));
}

bool gamma_member(const FpsValue& v, long double concrete, const Registry& reg,
                  const std::vector<long double>& point) {
    if (std::isnan(concrete)) {
        return false;
    }
    const Interval at = enclosure_at(v, reg, point);
    return at.lo() <= concrete && concrete <= at.hi();
}

bool gamma_member(const std::optional<FpsValue>& v, long double concrete, const Registry& reg,
                  const std::vector<long double>& point) {
    return v.has_value() && gamma_member(*v, concrete, reg, point);
}

FpsValue real_slope_eval(const Expr& e, const std::map<std::string, FpsValue>& env, Registry& reg) {
    Evaluator<SlopeDomain> ev(reg);
    return ev.eval(e, env);
}

DerivValue real_derivative_eval(const Expr& e, const std::map<std::string, DerivValue>& env) {
    switch (e.op) {
    case Expr::Op::literal: return deriv_constant(real_literal_interval(e.text));
    case Expr::Op::var: {
        auto it = env.find(e.text);
        if (it == env.end()) {
            throw AnalysisError("variable '" + e.text + "' has no value");
        }
        return it->second;
    }
    case Expr::Op::neg: return deriv_neg(real_derivative_eval(*e.args[0], env));
    case Expr::Op::sqrt: return deriv_sqrt(real_derivative_eval(*e.args[0], env));
    case Expr::Op::add: return deriv_add(real_derivative_eval(*e.args[0], env), real_derivative_eval(*e.args[1], env));
    case Expr::Op::sub: return deriv_sub(real_derivative_eval(*e.args[0], env), real_derivative_eval(*e.args[1], env));
    case Expr::Op::mul: return deriv_mul(real_derivative_eval(*e.args[0], env), real_derivative_eval(*e.args[1], env));
    case Expr::Op::div: {
        const DerivValue h = real_derivative_eval(*e.args[1], env);
        if (h.naive.contains_zero()) {
            throw DomainError("division by an interval containing zero");
        }
        return deriv_div(real_derivative_eval(*e.args[0], env), h);
    }
    }
    throw AnalysisError("unknown expression");
}

} // namespace fps
