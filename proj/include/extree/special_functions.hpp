#pragma once

namespace extree {

/// Trigamma function, the second derivative of log Gamma, for x > 0.
/// Shifts to x >= 10 with psi1(x) = psi1(x + 1) + 1/x^2 and finishes with the
/// Bernoulli asymptotic series; relative error below 1e-13 on (0, inf).
double trigamma(double x);

/// Standard normal distribution function.
double normal_cdf(double x);

/// 1 - normal_cdf(x), evaluated without cancellation.
double normal_sf(double x);

}  // namespace extree
