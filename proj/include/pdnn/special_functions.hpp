// SPDX-License-Identifier: Apache-2.0
//
// Special functions needed by the Rician detection analysis.

#pragma once

namespace pdnn
{

// Modified Bessel function of the first kind, order zero. x >= 0.
// Returns +inf once I0(x) exceeds the double range (x > ~713.98).
double bessel_i0(double x);

// exp(-x) I0(x), finite for every x >= 0.
double bessel_i0_scaled(double x);

// First-order Marcum Q-function Q1(a, b), a, b >= 0.
//
// Evaluated through the Poisson-mixture representation
//   Q1(a, b) = sum_k Pois(k; a^2/2) * P[Pois(b^2/2) <= k],
// i.e. the probability that a Poisson(b^2/2) variate does not exceed an
// independent Poisson(a^2/2) variate. Both pmfs are generated by recurrence
// outward from their modes over a +-12 sigma window, so the cost scales with
// sqrt(a^2 + b^2) and no branch relies on an asymptotic approximation.
double marcum_q1(double a, double b);

// 1 - Q1(a, b), computed directly so small values keep relative accuracy.
// This is the Rician CDF at b for non-centrality a (unit sigma).
double marcum_q1_complement(double a, double b);

} // namespace pdnn
