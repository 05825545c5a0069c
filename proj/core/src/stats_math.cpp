#include "rfcount/stats_math.hpp"

#include <cmath>
#include <limits>

#include "rfcount/errors.hpp"

namespace rfcount {

double normal_cdf(double x) {
    // erfc keeps full precision in the lower tail where erf saturates.
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_band_probability(double mean, double std, double lo, double hi) {
    if (std < 0.0) throw DomainError("normal_band_probability: negative std");
    if (lo > hi) throw DomainError("normal_band_probability: lo > hi");
    if (std == 0.0) return (mean >= lo && mean <= hi) ? 1.0 : 0.0;
    return normal_cdf((hi - mean) / std) - normal_cdf((lo - mean) / std);
}

namespace {

// Continued-fraction core for the incomplete beta function, evaluated with
// the modified Lentz algorithm.  Converges quickly for x < (a+1)/(a+b+2).
double beta_cont_frac(double a, double b, double x) {
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 500;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw DomainError("regularized_incomplete_beta: continued fraction failed to converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("regularized_incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cont_frac(a, b, x) / a;
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0))
        throw DomainError("f_upper_tail: degrees of freedom must be positive");
    if (std::isnan(f)) throw DomainError("f_upper_tail: f is NaN");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    double x = df2 / (df2 + df1 * f);
    return regularized_incomplete_beta(0.5 * df2, 0.5 * df1, x);
}

}  // namespace rfcount
