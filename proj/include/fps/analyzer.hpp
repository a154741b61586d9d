// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fps/diagnostics.hpp"
#include "fps/interval.hpp"
#include "fps/precision.hpp"
#include "fps/program.hpp"
#include "fps/slope.hpp"

namespace fps {

class AnalysisError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// fps: floating-point slopes. real_slope: the same expansion in real
// arithmetic (not sound for floats; a baseline). interval: plain intervals
// with the profile's rounding errors.
enum class DomainKind { fps, real_slope, interval };

const char* domain_name(DomainKind d);
std::optional<DomainKind> parse_domain(std::string_view name);

struct AnalyzerOptions {
    std::optional<Precision> precision; // overrides the program's
    std::optional<int> unroll;          // overrides the program's step count
    bool fixpoint = true;
    int widen_delay = 3;
    int max_iterations = 1000;
    std::optional<Thresholds> thresholds; // default: the profile's
};

enum class VarRole { input, state, computed };

const char* role_name(VarRole r);

template <class V>
struct VarResult {
    std::string name;
    VarRole role = VarRole::computed;
    bool output = false;
    std::vector<std::optional<V>> steps; // value during each unrolled step
    std::optional<V> limit;              // value at every later step
};

template <class V>
struct Analysis {
    Precision precision = Precision::double_;
    DomainKind domain = DomainKind::fps;
    int unroll = 0;
    Registry registry;
    std::vector<VarResult<V>> vars;
    bool fixpoint_run = false;
    int iterations = 0;
    bool converged = false;
    Diagnostics diagnostics;

    [[nodiscard]] const VarResult<V>* find(const std::string& name) const {
        for (const auto& v : vars) {
            if (v.name == name) {
                return &v;
            }
        }
        return nullptr;
    }
};

// Throws ProgramError for malformed programs and AnalysisError on internal
// inconsistencies.
Analysis<FpsValue> analyze_slopes(const Program& p, const AnalyzerOptions& opts,
                                  DomainKind kind = DomainKind::fps);
Analysis<Interval> analyze_intervals(const Program& p, const AnalyzerOptions& opts);

// Domain-independent view of an analysis: the enclosure of every variable.
struct VarBounds {
    std::string name;
    VarRole role = VarRole::computed;
    bool output = false;
    std::vector<std::optional<Interval>> steps;
    std::optional<Interval> limit;

    // Join over the unrolled steps.
    [[nodiscard]] Interval unrolled_hull() const;
};

struct Report {
    Precision precision = Precision::double_;
    DomainKind domain = DomainKind::fps;
    int unroll = 0;
    bool fixpoint_run = false;
    int iterations = 0;
    bool converged = false;
    std::vector<Registry::Entry> registry;
    std::vector<VarBounds> vars;
    Diagnostics diagnostics;

    [[nodiscard]] const VarBounds* find(const std::string& name) const;
};

Report make_report(const Analysis<FpsValue>& a);
Report make_report(const Analysis<Interval>& a);

// Runs the requested domain and returns its report.
Report analyze(const Program& p, const AnalyzerOptions& opts, DomainKind kind);

// Whether `concrete` is among the values `v` represents when the independent
// variables take the values in `point`.
bool gamma_member(const FpsValue& v, long double concrete, const Registry& reg, const std::vector<long double>& point);
bool gamma_member(const std::optional<FpsValue>& v, long double concrete, const Registry& reg,
                  const std::vector<long double>& point);

// Expansion of one expression in real arithmetic. Variables are looked up in
// `env`; literals are enclosed exactly.
FpsValue real_slope_eval(const Expr& e, const std::map<std::string, FpsValue>& env, Registry& reg);
DerivValue real_derivative_eval(const Expr& e, const std::map<std::string, DerivValue>& env);

} // namespace fps
