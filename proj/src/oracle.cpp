// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

namespace fps {

namespace {

long double store(Precision p, long double x) {
    switch (p) {
    case Precision::single: return static_cast<float>(static_cast<double>(x));
    case Precision::double_:
    case Precision::double_rounding: return static_cast<double>(x);
    case Precision::extended: return x;
    }
    return x;
}

template <class Op>
long double apply(Precision p, long double a, long double b, Op op) {
    switch (p) {
    case Precision::single:
    case Precision::double_: return store(p, op(static_cast<double>(a), static_cast<double>(b)));
    case Precision::extended:
    case Precision::double_rounding: return store(p, op(a, b));
    }
    return 0;
}

bool compare(Cmp c, long double x, long double k) {
    switch (c) {
    case Cmp::ge: return x >= k;
    case Cmp::gt: return x > k;
    case Cmp::ne: return x != k;
    }
    return false;
}

class Machine {
  public:
    explicit Machine(Precision prec) : prec_(prec) {}

    long double eval(const Expr& e, const std::map<std::string, long double>& env) const {
        switch (e.op) {
        case Expr::Op::literal: return literal_value(prec_, e.text);
        case Expr::Op::var: return env.at(e.text);
        case Expr::Op::neg: return -eval(*e.args[0], env);
        case Expr::Op::sqrt: return concrete_sqrt(prec_, eval(*e.args[0], env));
        default: break;
        }
        const long double a = eval(*e.args[0], env);
        const long double b = eval(*e.args[1], env);
        switch (e.op) {
        case Expr::Op::add: return concrete_add(prec_, a, b);
        case Expr::Op::sub: return concrete_sub(prec_, a, b);
        case Expr::Op::mul: return concrete_mul(prec_, a, b);
        case Expr::Op::div: return concrete_div(prec_, a, b);
        default: break;
        }
        throw std::logic_error("unknown expression");
    }

    void exec(const std::vector<Instr>& body, std::map<std::string, long double>& env, int t,
              std::vector<GuardEvent>& guards) const {
        for (const auto& i : body) {
            if (i.kind == Instr::Kind::assign) {
                env[i.var] = eval(*i.expr, env);
                continue;
            }
            const long double lhs = eval(*i.expr, env);
            const bool taken = compare(i.cmp, lhs, literal_value(prec_, i.constant));
            guards.push_back(GuardEvent{t, i.site, lhs, taken});
            exec(taken ? i.then_body : i.else_body, env, t, guards);
        }
    }

  private:
    Precision prec_;
};

Interval shrink(const Interval& b, double fraction) {
    if (b.is_bottom() || !b.is_finite() || b.is_point()) {
        return b;
    }
    const double cut = 0.5 * fraction * (b.hi() - b.lo());
    return Interval(b.lo() + cut, b.hi() - cut);
}

bool nan_flagged(const Report& r, int step, bool limit) {
    for (const auto& d : r.diagnostics.entries()) {
        const bool nan_kind =
            d.kind == DiagKind::division_by_zero || d.kind == DiagKind::invalid_sqrt || d.kind == DiagKind::invalid;
        if (!nan_kind) {
            continue;
        }
        // NaN flows on from where it was produced; any earlier producer
        // explains it.
        if (d.phase == Phase::unroll && d.first_step <= step) {
            return true;
        }
        if (d.phase == Phase::fixpoint && limit) {
            return true;
        }
    }
    return false;
}

} // namespace

long double concrete_add(Precision p, long double a, long double b) {
    return apply(p, a, b, [](auto x, auto y) { return x + y; });
}
long double concrete_sub(Precision p, long double a, long double b) {
    return apply(p, a, b, [](auto x, auto y) { return x - y; });
}
long double concrete_mul(Precision p, long double a, long double b) {
    return apply(p, a, b, [](auto x, auto y) { return x * y; });
}
long double concrete_div(Precision p, long double a, long double b) {
    return apply(p, a, b, [](auto x, auto y) { return x / y; });
}
long double concrete_sqrt(Precision p, long double a) {
    return apply(p, a, 0.0L, [](auto x, auto) { return std::sqrt(x); });
}

Trace simulate_concrete(const Program& p, Precision precision, const std::vector<long double>& inputs, int steps) {
    if (inputs.size() != p.inputs.size()) {
        throw std::invalid_argument("one value per input is required");
    }
    Machine m(precision);
    Trace tr;
    tr.names = variable_names(p);
    std::map<std::string, long double> states;
    for (const auto& s : p.states) {
        states[s.name] = literal_value(precision, s.init);
    }
    for (int t = 0; t < steps; ++t) {
        std::map<std::string, long double> env = states;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            env[p.inputs[i].name] = inputs[i];
        }
        m.exec(p.body, env, t, tr.guards);
        std::vector<long double> row;
        row.reserve(tr.names.size());
        for (const auto& n : tr.names) {
            auto it = env.find(n);
            row.push_back(it == env.end() ? std::nanl("") : it->second);
        }
        tr.steps.push_back(std::move(row));
        for (const auto& s : p.states) {
            states[s.name] = env.at(s.source);
        }
    }
    return tr;
}

std::vector<std::map<std::string, long double>> simulate_model(const Model& m, Precision precision,
                                                                const std::vector<long double>& inputs, int steps) {
    std::map<std::string, long double> delays;
    std::map<std::string, long double> fixed;
    std::size_t next = 0;
    for (const auto& b : m.blocks) {
        if (b.kind == Block::Kind::unit_delay) {
            delays[b.name] = literal_value(precision, b.params[0]);
        } else if (b.kind == Block::Kind::input) {
            fixed[b.name] = inputs.at(next++);
        }
    }
    std::vector<std::map<std::string, long double>> out;
    for (int t = 0; t < steps; ++t) {
        std::map<std::string, long double> vals;
        auto value = [&](auto&& self, const std::string& name) -> long double {
            if (auto it = vals.find(name); it != vals.end()) {
                return it->second;
            }
            const Block& b = *m.find(name);
            auto in = [&](std::size_t k) { return self(self, b.inputs[k].name); };
            long double v = 0;
            switch (b.kind) {
            case Block::Kind::input: v = fixed.at(name); break;
            case Block::Kind::unit_delay: v = delays.at(name); break;
            case Block::Kind::constant: v = literal_value(precision, b.params[0]); break;
            case Block::Kind::gain: v = concrete_mul(precision, in(0), literal_value(precision, b.params[0])); break;
            case Block::Kind::sum:
                v = b.signs[0] == '-' ? -in(0) : in(0);
                for (std::size_t k = 1; k < b.inputs.size(); ++k) {
                    v = b.signs[k] == '-' ? concrete_sub(precision, v, in(k)) : concrete_add(precision, v, in(k));
                }
                break;
            case Block::Kind::product:
                v = in(0);
                for (std::size_t k = 1; k < b.inputs.size(); ++k) {
                    v = concrete_mul(precision, v, in(k));
                }
                break;
            case Block::Kind::div: v = concrete_div(precision, in(0), in(1)); break;
            case Block::Kind::sqrt: v = concrete_sqrt(precision, in(0)); break;
            case Block::Kind::switch_:
                v = compare(b.cmp, in(0), literal_value(precision, b.params[0])) ? in(1) : in(2);
                break;
            case Block::Kind::output: v = in(0); break;
            }
            vals[name] = v;
            return v;
        };
        for (const auto& b : m.blocks) {
            value(value, b.name);
        }
        for (const auto& b : m.blocks) {
            if (b.kind == Block::Kind::unit_delay) {
                delays[b.name] = vals.at(b.inputs[0].name);
            }
        }
        out.push_back(std::move(vals));
    }
    return out;
}

namespace {

struct SampleResult {
    long checks = 0;
    long violation_count = 0;
    std::vector<Violation> violations;
};

SampleResult check_sample(const Program& p, const Report& report, const Analysis<FpsValue>* relational,
                          long n, const std::vector<long double>& in, int total, std::size_t max_witnesses) {
    const Precision prec = report.precision;
    const Trace tr = simulate_concrete(p, prec, in, total);
    SampleResult res;

    // The sampled point of the independent variables.
    std::vector<long double> point;
    if (relational != nullptr) {
        std::size_t next_input = 0;
        for (std::size_t k = 0; k < relational->registry.size(); ++k) {
            const auto& e = relational->registry[k];
            long double u = e.mid;
            if (e.origin == Registry::Origin::input) {
                u = in.at(next_input++);
            } else if (e.origin == Registry::Origin::state) {
                for (const auto& s : p.states) {
                    if (s.name == e.name) {
                        u = literal_value(prec, s.init);
                    }
                }
            } else {
                for (const auto& g : tr.guards) {
                    if (g.step == e.step && g.site == e.site && g.then_branch == e.then_branch) {
                        u = g.lhs;
                    }
                }
            }
            point.push_back(u);
        }
    }

    for (int t = 0; t < total; ++t) {
        const bool limit = t >= report.unroll;
        for (std::size_t i = 0; i < report.vars.size(); ++i) {
            const auto& vb = report.vars[i];
            const std::optional<Interval>& b = limit ? vb.limit : vb.steps[static_cast<std::size_t>(t)];
            if (!b) {
                continue;
            }
            const long double x = tr.steps[static_cast<std::size_t>(t)][i];
            ++res.checks;
            std::string failed;
            if (std::isnan(x)) {
                if (!nan_flagged(report, t, limit)) {
                    failed = "nan";
                }
            } else if (!(b->lo() <= x && x <= b->hi())) {
                failed = "bound";
            } else if (relational != nullptr) {
                const auto& vr = relational->vars[i];
                const std::optional<FpsValue>& val = limit ? vr.limit : vr.steps[static_cast<std::size_t>(t)];
                if (!gamma_member(val, x, relational->registry, point)) {
                    failed = "relational";
                }
            }
            if (!failed.empty()) {
                ++res.violation_count;
                if (res.violations.size() < max_witnesses) {
                    res.violations.push_back(Violation{n, t, vb.name, failed, x, *b, in});
                }
            }
        }
    }
    return res;
}

} // namespace

Verdict fuzz_soundness(const Program& p, const Report& report, const Analysis<FpsValue>* relational,
                       const FuzzOptions& opts) {
    const Precision prec = report.precision;
    std::vector<Interval> ranges;
    for (const auto& in : p.inputs) {
        ranges.push_back(input_interval(prec, in.lo, in.hi));
    }
    // Without states every step repeats the first, one extra step covers the
    // limit values.
    const int extra = report.fixpoint_run ? (p.states.empty() ? std::min(1, opts.extra_steps) : opts.extra_steps) : 0;
    const int total = report.unroll + extra;

    // Points are drawn up front so the verdict does not depend on threading.
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<long double> unit(0.0L, 1.0L);
    const std::size_t count = opts.samples > 0 ? static_cast<std::size_t>(opts.samples) : 0;
    std::vector<std::vector<long double>> points(count);
    for (std::size_t n = 0; n < count; ++n) {
        for (const auto& r : ranges) {
            long double x = 0;
            const int pick = n == 0 ? 0 : n == 1 ? 1 : static_cast<int>(rng() % 4);
            if (pick == 0) {
                x = r.lo();
            } else if (pick == 1) {
                x = r.hi();
            } else {
                x = r.lo() + unit(rng) * (static_cast<long double>(r.hi()) - r.lo());
                x = std::clamp(to_format(prec, x), static_cast<long double>(r.lo()), static_cast<long double>(r.hi()));
            }
            points[n].push_back(x);
        }
    }

    std::vector<SampleResult> results(count);
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t n = next++; n < count; n = next++) {
            results[n] = check_sample(p, report, relational, static_cast<long>(n), points[n], total,
                                      opts.max_witnesses);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& th : pool) {
        th.join();
    }

    Verdict v;
    v.samples = static_cast<long>(count);
    for (auto& r : results) {
        v.checks += r.checks;
        v.violation_count += r.violation_count;
        for (auto& w : r.violations) {
            if (v.violations.size() < opts.max_witnesses) {
                v.violations.push_back(std::move(w));
            }
        }
    }
    return v;
}

Report shrink_report(const Report& report, double fraction) {
    Report r = report;
    for (auto& vb : r.vars) {
        for (auto& s : vb.steps) {
            if (s) {
                s = shrink(*s, fraction);
            }
        }
        if (vb.limit) {
            vb.limit = shrink(*vb.limit, fraction);
        }
    }
    return r;
}

Report shrink_report(const Report& report, double fraction, const std::string& var, int step) {
    Report r = report;
    for (auto& vb : r.vars) {
        if (vb.name != var) {
            continue;
        }
        std::optional<Interval>& b = step < 0 ? vb.limit : vb.steps.at(static_cast<std::size_t>(step));
        if (b) {
            b = shrink(*b, fraction);
        }
    }
    return r;
}

} // namespace fps
