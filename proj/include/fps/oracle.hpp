// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fps/analyzer.hpp"
#include "fps/model.hpp"
#include "fps/precision.hpp"
#include "fps/program.hpp"

namespace fps {

// One correctly rounded operation of the profile, on values of its format.
// single: binary64 operation rounded to binary32; double: binary64;
// extended: x87 extended; double-rounding: extended, then rounded to binary64.
long double concrete_add(Precision p, long double a, long double b);
long double concrete_sub(Precision p, long double a, long double b);
long double concrete_mul(Precision p, long double a, long double b);
long double concrete_div(Precision p, long double a, long double b);
long double concrete_sqrt(Precision p, long double a);

struct GuardEvent {
    int step = 0;
    int site = 0;
    long double lhs = 0;
    bool then_branch = true;
};

// Values of every variable (in variable_names order) at every step.
struct Trace {
    std::vector<std::string> names;
    std::vector<std::vector<long double>> steps;
    std::vector<GuardEvent> guards;
};

// Runs the program for `steps` steps with the inputs fixed to `inputs` (one
// value per declared input, already in the format).
Trace simulate_concrete(const Program& p, Precision precision, const std::vector<long double>& inputs, int steps);

// The block diagram run directly, block by block, without lowering: values
// per step keyed by block name. `inputs` follow the order of the Input blocks.
std::vector<std::map<std::string, long double>> simulate_model(const Model& m, Precision precision,
                                                                const std::vector<long double>& inputs, int steps);

struct FuzzOptions {
    long samples = 10000;
    std::uint64_t seed = 42;
    // Steps simulated past the unrolled ones, checked against the limit
    // values when the fixpoint was computed.
    int extra_steps = 20;
    std::size_t max_witnesses = 20;
};

struct Violation {
    long sample = 0;
    int step = 0;
    std::string var;
    std::string check; // "bound", "relational" or "nan"
    long double value = 0;
    Interval bound = Interval::top();
    std::vector<long double> inputs;
};

struct Verdict {
    long samples = 0;
    long checks = 0;
    long violation_count = 0;
    std::vector<Violation> violations; // the first few, with witnesses

    [[nodiscard]] bool sound() const { return violation_count == 0; }
};

// Samples input points (the all-low and all-high corners first, then a mix of
// endpoints and uniform values), runs the concrete program and checks every
// value against the report. With `relational` set, also checks membership in
// the slope values at the sampled point. Deterministic in the seed.
Verdict fuzz_soundness(const Program& p, const Report& report, const Analysis<FpsValue>* relational,
                       const FuzzOptions& opts);

// Copy of the report with every bound shrunk by `fraction` of its width
// (half on each side). For fault injection.
Report shrink_report(const Report& report, double fraction);
// Same for one variable at one step (step -1: its limit value).
Report shrink_report(const Report& report, double fraction, const std::string& var, int step);

} // namespace fps
