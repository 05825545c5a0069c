#pragma once

namespace rfcount {

/// Standard normal CDF Phi(x).
double normal_cdf(double x);

/// Probability that a N(mean, std^2) variable falls inside [lo, hi].
/// With std == 0 the distribution is a point mass at mean.
double normal_band_probability(double mean, double std, double lo, double hi);

/// Regularized incomplete beta function I_x(a, b) for a > 0, b > 0,
/// 0 <= x <= 1.  Absolute error below 1e-8.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(F >= f) of the F distribution with
/// (df1, df2) degrees of freedom.
double f_upper_tail(double f, double df1, double df2);

}  // namespace rfcount
