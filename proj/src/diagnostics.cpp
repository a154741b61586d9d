// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#include "fps/diagnostics.hpp"

#include <algorithm>

namespace fps {

const char* diag_kind_name(DiagKind k) {
    switch (k) {
    case DiagKind::division_by_zero: return "division-by-zero";
    case DiagKind::invalid_sqrt: return "invalid-sqrt";
    case DiagKind::invalid: return "invalid-operation";
    case DiagKind::overflow: return "overflow";
    case DiagKind::guard_precision: return "guard-precision";
    case DiagKind::fixpoint_cap: return "fixpoint-cap";
    }
    return "?";
}

const char* phase_name(Phase p) { return p == Phase::unroll ? "unroll" : "fixpoint"; }

bool is_runtime_error(DiagKind k) {
    return k == DiagKind::division_by_zero || k == DiagKind::invalid_sqrt || k == DiagKind::invalid ||
           k == DiagKind::overflow;
}

void Diagnostics::add(DiagKind kind, const std::string& var, Phase phase, int step, std::string message) {
    for (auto& d : entries_) {
        if (d.kind == kind && d.var == var && d.phase == phase) {
            ++d.count;
            return;
        }
    }
    entries_.push_back(Diagnostic{kind, var, phase, step, 1, std::move(message)});
}

bool Diagnostics::has_runtime_errors() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const Diagnostic& d) { return is_runtime_error(d.kind); });
}

bool Diagnostics::has(DiagKind kind, const std::string& var) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Diagnostic& d) { return d.kind == kind && d.var == var; });
}

bool Diagnostics::flags(const std::string& var, Phase phase) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Diagnostic& d) {
        return d.var == var && d.phase == phase && is_runtime_error(d.kind);
    });
}

} // namespace fps
