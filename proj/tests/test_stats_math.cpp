#include <cmath>
#include <limits>

#include "approx.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "rfcount/errors.hpp"
#include "rfcount/stats_math.hpp"

using namespace rfcount;

TEST_SUITE("stats_math") {

TEST_CASE("normal cdf matches quadrature oracle across the real line") {
    for (double x : {-8.0, -3.0, -1.5, -1.0, -0.31, 0.0, 0.27, 1.0, 2.4, 5.0, 9.0}) {
        CAPTURE(x);
        CHECK(normal_cdf(x) == testutil::within(oracle::normal_cdf(x), 1e-9));
    }
}

TEST_CASE("normal cdf symmetry and fixed points") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    for (double x : {0.3, 1.0, 2.5, 4.0})
        CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(normal_cdf(40.0) == 1.0);
    CHECK(normal_cdf(-40.0) == 0.0);
}

TEST_CASE("band probability matches direct density integration") {
    struct Case {
        double mean, std, lo, hi;
    };
    for (const Case& c : {Case{0.0, 1.0, -1.0, 1.0}, Case{0.2727, 4.6280, -1.0, 1.0},
                          Case{0.3, 0.6325, -1.0, 1.0}, Case{-2.0, 0.5, -1.0, 1.0},
                          Case{5.0, 3.0, -10.0, 0.0}}) {
        CAPTURE(c.mean);
        CAPTURE(c.std);
        double expected = oracle::normal_band(c.mean, c.std, c.lo, c.hi);
        CHECK(normal_band_probability(c.mean, c.std, c.lo, c.hi) ==
              testutil::within(expected, 1e-6));
    }
}

TEST_CASE("band probability with zero std is a point mass") {
    CHECK(normal_band_probability(0.0, 0.0, -1.0, 1.0) == 1.0);
    CHECK(normal_band_probability(1.0, 0.0, -1.0, 1.0) == 1.0);   // boundary inside
    CHECK(normal_band_probability(1.001, 0.0, -1.0, 1.0) == 0.0);
    CHECK(normal_band_probability(-3.0, 0.0, -1.0, 1.0) == 0.0);
}

TEST_CASE("band probability rejects bad arguments") {
    CHECK_THROWS_AS(normal_band_probability(0.0, -1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(normal_band_probability(0.0, 1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("incomplete beta closed forms") {
    // I_x(1, b) = 1 - (1-x)^b and I_x(a, 1) = x^a.
    for (double x : {0.1, 0.4, 0.75, 0.95}) {
        for (double b : {0.5, 1.0, 3.0, 12.0}) {
            CAPTURE(x);
            CAPTURE(b);
            CHECK(regularized_incomplete_beta(1.0, b, x) ==
                  testutil::within(1.0 - std::pow(1.0 - x, b), 1e-10));
            CHECK(regularized_incomplete_beta(b, 1.0, x) ==
                  testutil::within(std::pow(x, b), 1e-10));
        }
    }
}

TEST_CASE("incomplete beta symmetry and bounds") {
    for (double a : {0.5, 2.0, 7.5}) {
        for (double b : {1.5, 4.0, 120.0}) {
            for (double x : {0.05, 0.3, 0.5, 0.8}) {
                CAPTURE(a);
                CAPTURE(b);
                CAPTURE(x);
                double lhs = regularized_incomplete_beta(a, b, x);
                double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
                CHECK(lhs == testutil::within(rhs, 1e-10));
                CHECK(lhs >= 0.0);
                CHECK(lhs <= 1.0);
            }
        }
    }
    CHECK(regularized_incomplete_beta(3.0, 4.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(3.0, 4.0, 1.0) == 1.0);
}

TEST_CASE("f upper tail matches quadrature oracle") {
    struct Case {
        double f, d1, d2;
    };
    for (const Case& c : {Case{2.5, 4.0, 245.0}, Case{1.0, 4.0, 245.0}, Case{0.5, 2.0, 30.0},
                          Case{3.2, 9.0, 120.0}, Case{17.986, 4.0, 20.0}}) {
        CAPTURE(c.f);
        CAPTURE(c.d1);
        CAPTURE(c.d2);
        CHECK(f_upper_tail(c.f, c.d1, c.d2) ==
              testutil::within(oracle::f_upper_tail(c.f, c.d1, c.d2), 1e-6));
    }
}

TEST_CASE("f upper tail limits") {
    CHECK(f_upper_tail(0.0, 4.0, 245.0) == 1.0);
    CHECK(f_upper_tail(-1.0, 4.0, 245.0) == 1.0);
    CHECK(f_upper_tail(std::numeric_limits<double>::infinity(), 4.0, 245.0) == 0.0);
    // Monotone decreasing in f.
    double prev = 1.0;
    for (double f = 0.25; f < 16.0; f *= 2.0) {
        double p = f_upper_tail(f, 4.0, 245.0);
        CHECK(p < prev);
        prev = p;
    }
}

}  // TEST_SUITE
