// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "fps/analyzer.hpp"
#include "fps/oracle.hpp"

namespace fps {

inline constexpr int kReportSchema = 1;

// 17 significant digits, rounded toward -inf (up = false) or +inf, so a
// printed lower bound never exceeds the real one. "inf" / "-inf" for
// infinities.
std::string directed_decimal(double x, bool up);

// "[lo, hi]" with directed decimal bounds.
std::string format_interval(const Interval& x);

// Schema documented in docs/report-schema.md.
std::string report_json(const Report& r);
std::string report_text(const Report& r);

std::string verdict_json(const Verdict& v, const Report& r);
std::string verdict_text(const Verdict& v);

} // namespace fps
