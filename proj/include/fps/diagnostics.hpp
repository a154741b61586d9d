// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace fps {

enum class DiagKind {
    division_by_zero, // divisor may be zero
    invalid_sqrt,     // square root of a possibly negative value
    invalid,          // the operation may produce NaN
    overflow,         // the value may exceed the largest finite float
    guard_precision,  // a guard on a compound expression refines nothing
    fixpoint_cap,     // fixpoint iteration stopped at the cap
};

enum class Phase { unroll, fixpoint };

const char* diag_kind_name(DiagKind k);
const char* phase_name(Phase p);

// Possible run-time errors; the rest are notes.
bool is_runtime_error(DiagKind k);

struct Diagnostic {
    DiagKind kind;
    std::string var;
    Phase phase;
    int first_step = 0; // -1 for the fixpoint phase
    int count = 1;
    std::string message;
};

// Keeps one entry per (kind, variable, phase), in order of first occurrence.
class Diagnostics {
  public:
    void add(DiagKind kind, const std::string& var, Phase phase, int step, std::string message);

    [[nodiscard]] const std::vector<Diagnostic>& entries() const { return entries_; }
    [[nodiscard]] bool has_runtime_errors() const;
    [[nodiscard]] bool has(DiagKind kind, const std::string& var) const;
    // Any possible run-time error recorded for `var` in `phase`.
    [[nodiscard]] bool flags(const std::string& var, Phase phase) const;

  private:
    std::vector<Diagnostic> entries_;
};

} // namespace fps
