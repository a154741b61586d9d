// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fps/rounding.hpp"
#include "json.hpp"

namespace fps {

namespace {

using json = nlohmann::ordered_json;

std::string hex(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

std::string decimal17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

json number(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

json interval_json(const Interval& x) {
    if (x.is_bottom()) {
        return nullptr;
    }
    return json{{"lo", number(x.lo())},
                {"hi", number(x.hi())},
                {"lo_hex", hex(x.lo())},
                {"hi_hex", hex(x.hi())},
                {"lo_dec", directed_decimal(x.lo(), false)},
                {"hi_dec", directed_decimal(x.hi(), true)}};
}

json opt_interval(const std::optional<Interval>& x) { return x ? interval_json(*x) : json(nullptr); }

const char* origin_name(Registry::Origin o) {
    switch (o) {
    case Registry::Origin::input: return "input";
    case Registry::Origin::state: return "state";
    case Registry::Origin::meet: return "meet";
    }
    return "?";
}

std::string ld(long double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.21Lg", x);
    return buf;
}

} // namespace

std::string directed_decimal(double x, bool up) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0) {
        return "0";
    }
    // The 17-digit grid is finer than binary64 spacing, so stepping one ulp
    // against the direction and printing again always lands on the right side.
    double y = x;
    for (int i = 0; i < 4; ++i) {
        const std::string s = decimal17(y);
        const long double back = std::strtold(s.c_str(), nullptr);
        if (up ? back >= x : back <= x) {
            return s;
        }
        y = up ? rounding::next_up(y) : rounding::next_down(y);
    }
    return decimal17(x);
}

std::string format_interval(const Interval& x) {
    if (x.is_bottom()) {
        return "_|_";
    }
    return "[" + directed_decimal(x.lo(), false) + ", " + directed_decimal(x.hi(), true) + "]";
}

std::string report_json(const Report& r) {
    json j;
    j["schema"] = kReportSchema;
    j["domain"] = domain_name(r.domain);
    j["precision"] = std::string(precision_name(r.precision));
    j["unroll"] = r.unroll;
    j["fixpoint"] = {{"run", r.fixpoint_run}, {"iterations", r.iterations}, {"converged", r.converged}};
    json reg = json::array();
    for (const auto& e : r.registry) {
        json o{{"name", e.name}, {"origin", origin_name(e.origin)}, {"value", interval_json(e.value)},
               {"mid", number(e.mid)}};
        if (e.origin == Registry::Origin::meet) {
            o["step"] = e.step;
            o["site"] = e.site;
            o["branch"] = e.then_branch ? "then" : "else";
        }
        reg.push_back(std::move(o));
    }
    j["registry"] = std::move(reg);
    json vars = json::array();
    for (const auto& v : r.vars) {
        json steps = json::array();
        for (const auto& s : v.steps) {
            steps.push_back(opt_interval(s));
        }
        vars.push_back(json{{"name", v.name},
                            {"role", role_name(v.role)},
                            {"output", v.output},
                            {"steps", std::move(steps)},
                            {"unrolled_hull", interval_json(v.unrolled_hull())},
                            {"limit", opt_interval(v.limit)}});
    }
    j["variables"] = std::move(vars);
    json diags = json::array();
    for (const auto& d : r.diagnostics.entries()) {
        json o{{"kind", diag_kind_name(d.kind)},
               {"variable", d.var},
               {"phase", phase_name(d.phase)},
               {"count", d.count},
               {"runtime_error", is_runtime_error(d.kind)},
               {"message", d.message}};
        o["first_step"] = d.phase == Phase::unroll ? json(d.first_step) : json(nullptr);
        diags.push_back(std::move(o));
    }
    j["diagnostics"] = std::move(diags);
    return j.dump(2) + "\n";
}

std::string report_text(const Report& r) {
    std::ostringstream os;
    os << "domain " << domain_name(r.domain) << ", precision " << precision_name(r.precision) << ", " << r.unroll
       << " unrolled steps\n";
    if (!r.fixpoint_run) {
        os << "fixpoint: not computed\n";
    } else if (r.converged) {
        os << "fixpoint: stable after " << r.iterations << " iteration" << (r.iterations == 1 ? "" : "s") << "\n";
    } else {
        os << "fixpoint: iteration cap reached after " << r.iterations << " iterations\n";
    }
    for (const auto& v : r.vars) {
        if (!v.output) {
            continue;
        }
        os << "output " << v.name << "\n";
        for (std::size_t t = 0; t < v.steps.size(); ++t) {
            os << "  step " << t << ": " << (v.steps[t] ? format_interval(*v.steps[t]) : "unreachable") << "\n";
        }
        if (!v.steps.empty()) {
            os << "  unrolled steps: " << format_interval(v.unrolled_hull()) << "\n";
        }
        if (v.limit) {
            os << "  later steps: " << format_interval(*v.limit) << "\n";
        }
    }
    os << "variables\n";
    for (const auto& v : r.vars) {
        os << "  " << v.name << " (" << role_name(v.role) << ")";
        if (!v.steps.empty()) {
            os << " unrolled " << format_interval(v.unrolled_hull());
        }
        if (v.limit) {
            os << " later " << format_interval(*v.limit);
        }
        os << "\n";
    }
    const auto& ds = r.diagnostics.entries();
    os << "diagnostics: " << ds.size() << "\n";
    for (const auto& d : ds) {
        os << "  " << (is_runtime_error(d.kind) ? "warning" : "note") << " [" << diag_kind_name(d.kind) << "] "
           << d.message << " (" << phase_name(d.phase);
        if (d.phase == Phase::unroll) {
            os << ", first at step " << d.first_step;
        }
        if (d.count > 1) {
            os << ", " << d.count << " times";
        }
        os << ")\n";
    }
    return os.str();
}

std::string verdict_json(const Verdict& v, const Report& r) {
    json j;
    j["schema"] = kReportSchema;
    j["domain"] = domain_name(r.domain);
    j["precision"] = std::string(precision_name(r.precision));
    j["samples"] = v.samples;
    j["checks"] = v.checks;
    j["violations"] = v.violation_count;
    j["sound"] = v.sound();
    json ws = json::array();
    for (const auto& w : v.violations) {
        json inputs = json::array();
        for (long double x : w.inputs) {
            inputs.push_back(ld(x));
        }
        ws.push_back(json{{"sample", w.sample},
                          {"step", w.step},
                          {"variable", w.var},
                          {"check", w.check},
                          {"value", ld(w.value)},
                          {"bound", interval_json(w.bound)},
                          {"inputs", std::move(inputs)}});
    }
    j["witnesses"] = std::move(ws);
    return j.dump(2) + "\n";
}

std::string verdict_text(const Verdict& v) {
    std::ostringstream os;
    os << v.samples << " samples, " << v.checks << " checks, " << v.violation_count << " violation"
       << (v.violation_count == 1 ? "" : "s") << "\n";
    for (const auto& w : v.violations) {
        os << "  sample " << w.sample << " step " << w.step << " " << w.var << " = " << ld(w.value) << " outside "
           << format_interval(w.bound) << " (" << w.check << " check), inputs";
        for (long double x : w.inputs) {
            os << " " << ld(x);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace fps
