// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Directed rounding of binary64 operations without touching the FP environment.
//
// Each function returns the result of the exact real operation rounded toward
// -inf (`_down`) or +inf (`_up`). The round-to-nearest result is computed first
// and moved one ulp outward only when an error-free transformation shows it is
// on the wrong side of the exact value. Near the subnormal range, where the
// residual itself may be inexact, the result is nudged unconditionally.
//
// Conventions for infinite operands follow interval arithmetic: 0 * inf = 0.
// Results that are undefined (inf - inf, inf / inf, sqrt of a negative) are NaN;
// callers decide what NaN means.

namespace fps::rounding {

double next_up(double x);
double next_down(double x);

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);

} // namespace fps::rounding
