#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "approx.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "rfcount/errors.hpp"
#include "rfcount/lda.hpp"

using namespace rfcount;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct LabeledData {
    MatrixXd X;
    std::vector<int> labels;
};

LabeledData clusters(std::mt19937_64& rng, const std::vector<VectorXd>& centers,
                     std::size_t n_per_group, double noise_std) {
    std::normal_distribution<double> noise(0.0, noise_std);
    auto p = centers.front().size();
    LabeledData d;
    d.X.resize(static_cast<Eigen::Index>(centers.size() * n_per_group), p);
    Eigen::Index row = 0;
    for (std::size_t g = 0; g < centers.size(); ++g)
        for (std::size_t i = 0; i < n_per_group; ++i, ++row) {
            for (Eigen::Index j = 0; j < p; ++j) d.X(row, j) = centers[g](j) + noise(rng);
            d.labels.push_back(static_cast<int>(g) + 1);
        }
    return d;
}

// The published four-function coefficient set, as a scoring-only model.
lda::Model table_model() {
    lda::Model m;
    m.p = 10;
    m.coefficients.resize(4, 10);
    m.coefficients << 0.260, -0.837, -1.033, 0.999, 17.142, 3.964, 0.298, 0.306, 0.011, 0.002,
        0.863, -1.044, -1.023, 1.046, 17.026, -6.788, 0.225, -0.203, 0.017, -0.003,  //
        0.611, 0.843, -4.612, -1.165, 32.236, 2.522, 0.514, -0.140, -0.001, 0.005,   //
        0.084, 0.460, -0.471, -0.934, -12.682, 12.729, -0.358, -0.146, 0.018, 0.012;
    m.constants.resize(4);
    m.constants << -10.805, -2.414, -10.974, 2.054;
    m.centroids = MatrixXd::Zero(5, 4);
    m.eigenvalues = VectorXd::Zero(4);
    m.variance_pct = VectorXd::Zero(4);
    m.canonical_correlations = VectorXd::Zero(4);
    m.structure = MatrixXd::Zero(10, 4);
    m.group_labels = {1, 2, 3, 4, 5};
    m.group_counts = {50, 50, 50, 50, 50};
    return m;
}

}  // namespace

TEST_SUITE("lda") {

TEST_CASE("two-group fit recovers the closed-form direction") {
    std::mt19937_64 rng(301);
    VectorXd c1(4), c2(4);
    c1 << 0.0, 1.0, -2.0, 0.5;
    c2 << 3.0, -1.0, 0.0, 2.5;
    LabeledData d = clusters(rng, {c1, c2}, 40, 1.0);
    lda::Model m = lda::fit(d.X, d.labels);
    REQUIRE(m.n_functions() == 1);

    // Independent route: S_w^{-1} (m1 - m2) from scratch.
    VectorXd m1 = VectorXd::Zero(4), m2 = VectorXd::Zero(4);
    for (Eigen::Index i = 0; i < d.X.rows(); ++i)
        (d.labels[static_cast<std::size_t>(i)] == 1 ? m1 : m2) += d.X.row(i).transpose();
    m1 /= 40.0;
    m2 /= 40.0;
    MatrixXd sw = MatrixXd::Zero(4, 4);
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        VectorXd centered =
            d.X.row(i).transpose() - (d.labels[static_cast<std::size_t>(i)] == 1 ? m1 : m2);
        sw += centered * centered.transpose();
    }
    VectorXd closed = sw.ldlt().solve(m1 - m2);

    VectorXd v = m.coefficients.row(0).transpose();
    double cosine = std::abs(closed.dot(v)) / (closed.norm() * v.norm());
    CHECK(cosine > 1.0 - 1e-9);
}

TEST_CASE("one-dimensional two-group fit, by hand") {
    MatrixXd X(4, 1);
    X << 0.0, 1.0, 10.0, 11.0;
    lda::Model m = lda::fit(X, {1, 1, 2, 2});

    REQUIRE(m.n_functions() == 1);
    CHECK(m.group_labels == std::vector<int>{1, 2});
    CHECK(m.group_counts == std::vector<int>{2, 2});
    CHECK(m.eigenvalues(0) == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(m.coefficients(0, 0) > 0.0);                       // sign convention
    CHECK(m.centroids(0, 0) < 0.0);                          // first group left of center
    CHECK(m.centroids(1, 0) == doctest::Approx(-m.centroids(0, 0)).epsilon(1e-12));
    CHECK(m.resubstitution_accuracy == 1.0);
    CHECK(m.regularization == 0.0);

    // Unit pooled within-group score variance fixes |v| = sqrt(2).
    CHECK(m.coefficients(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("equal group means leave no discriminating power") {
    MatrixXd X(6, 2);
    X << 0, 0, 1, 1, 0.5, 0, 0, 0, 1, 1, 0.5, 0;  // same three points per group
    lda::Model m = lda::fit(X, {1, 1, 1, 2, 2, 2});
    for (Eigen::Index k = 0; k < m.eigenvalues.size(); ++k) {
        CHECK(m.eigenvalues(k) >= 0.0);
        CHECK(m.eigenvalues(k) < 1e-9);
        CHECK(m.canonical_correlations(k) < 1e-4);
    }
}

TEST_CASE("well-separated groups classify themselves perfectly") {
    std::mt19937_64 rng(302);
    std::vector<VectorXd> centers;
    for (int g = 0; g < 5; ++g) {
        VectorXd c(3);
        c << 20.0 * g, -10.0 * g, 5.0 * g * g;
        centers.push_back(c);
    }
    LabeledData d = clusters(rng, centers, 20, 1.0);
    lda::Model m = lda::fit(d.X, d.labels);
    CHECK(m.n_functions() == 3);  // min(g-1, p)
    CHECK(m.resubstitution_accuracy == 1.0);
    for (Eigen::Index i = 0; i < d.X.rows(); ++i)
        REQUIRE(lda::classify(m, VectorXd(d.X.row(i).transpose())) ==
                d.labels[static_cast<std::size_t>(i)]);
}

TEST_CASE("fitted scores have unit pooled within-group variance") {
    std::mt19937_64 rng(303);
    std::vector<VectorXd> centers;
    for (int g = 0; g < 4; ++g) {
        VectorXd c(5);
        for (int j = 0; j < 5; ++j) c(j) = 3.0 * g * (j == g % 5 ? 1.0 : -0.5);
        centers.push_back(c);
    }
    LabeledData d = clusters(rng, centers, 30, 1.2);
    lda::Model m = lda::fit(d.X, d.labels);

    const auto n = d.X.rows();
    MatrixXd scores(n, m.n_functions());
    for (Eigen::Index i = 0; i < n; ++i)
        scores.row(i) = lda::score(m, VectorXd(d.X.row(i).transpose())).transpose();

    for (std::size_t k = 0; k < m.n_functions(); ++k) {
        auto kk = static_cast<Eigen::Index>(k);
        double pooled = 0.0;
        for (int g = 1; g <= 4; ++g) {
            double mean = 0.0;
            int count = 0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (d.labels[static_cast<std::size_t>(i)] == g) {
                    mean += scores(i, kk);
                    ++count;
                }
            mean /= count;
            for (Eigen::Index i = 0; i < n; ++i)
                if (d.labels[static_cast<std::size_t>(i)] == g)
                    pooled += (scores(i, kk) - mean) * (scores(i, kk) - mean);
        }
        pooled /= static_cast<double>(n - 4);
        CHECK(pooled == doctest::Approx(1.0).epsilon(1e-9));
    }

    // Grand mean scores zero; group means score at their centroids.
    VectorXd grand = d.X.colwise().mean().transpose();
    CHECK(lda::score(m, grand).norm() < 1e-9);
    for (int g = 1; g <= 4; ++g) {
        VectorXd gm = VectorXd::Zero(5);
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (d.labels[static_cast<std::size_t>(i)] == g) {
                gm += d.X.row(i).transpose();
                ++count;
            }
        gm /= count;
        VectorXd expect = m.centroids.row(g - 1).transpose();
        CHECK((lda::score(m, gm) - expect).norm() < 1e-9);
    }
}

TEST_CASE("published coefficients score the zero and unit probes") {
    lda::Model m = table_model();
    VectorXd zero = VectorXd::Zero(10);
    VectorXd s = lda::score(m, zero);
    CHECK(s(0) == -10.805);
    CHECK(s(1) == -2.414);
    CHECK(s(2) == -10.974);
    CHECK(s(3) == 2.054);

    VectorXd cv_probe = VectorXd::Zero(10);
    cv_probe(4) = 1.0;  // R1 CV
    VectorXd sp = lda::score(m, cv_probe);
    CHECK(sp(0) == testutil::within(6.337, 1e-9));
    CHECK(sp(1) == testutil::within(14.612, 1e-9));
    CHECK(sp(2) == testutil::within(21.262, 1e-9));
    CHECK(sp(3) == testutil::within(-10.628, 1e-9));
}

TEST_CASE("feature-vector overload matches the raw-vector path") {
    lda::Model m = table_model();
    EventFeatureVector f;
    f.r1_mean = 0.4;
    f.r2_mean = -0.2;
    f.r1_std = 3.0;
    f.r2_std = 2.5;
    f.r1_cv = 0.8;
    f.r2_cv = 0.9;
    f.r1_duration = 20.0;
    f.r2_duration = 24.0;
    f.r1_area = 60.0;
    f.r2_area = 66.0;
    auto vals = f.values();
    VectorXd x(10);
    for (int j = 0; j < 10; ++j) x(j) = vals[static_cast<std::size_t>(j)];
    CHECK((lda::score(m, f) - lda::score(m, x)).norm() == 0.0);
}

TEST_CASE("score and classify validate dimensions") {
    lda::Model m = table_model();
    CHECK_THROWS_AS(lda::score(m, VectorXd::Zero(8)), DimensionError);
    CHECK_THROWS_AS(lda::classify(lda::Model{}, VectorXd::Zero(10)), Error);
}

TEST_CASE("classification ties break toward the smaller label") {
    lda::Model m;
    m.p = 1;
    m.coefficients = MatrixXd::Ones(1, 1);
    m.constants = VectorXd::Zero(1);
    m.centroids.resize(2, 1);
    m.centroids << -1.0, 1.0;
    m.group_labels = {2, 5};
    m.group_counts = {3, 3};
    VectorXd x(1);
    x << 0.0;  // equidistant
    CHECK(lda::classify(m, x) == 2);
    x << 0.001;
    CHECK(lda::classify(m, x) == 5);
    x << -0.001;
    CHECK(lda::classify(m, x) == 2);
}

TEST_CASE("classify agrees with the exhaustive-distance oracle") {
    std::mt19937_64 rng(304);
    std::vector<VectorXd> centers;
    for (int g = 0; g < 5; ++g) {
        VectorXd c(4);
        for (int j = 0; j < 4; ++j) c(j) = 4.0 * ((g + j) % 5) - 6.0;
        centers.push_back(c);
    }
    LabeledData d = clusters(rng, centers, 25, 2.0);  // overlapping clusters on purpose
    lda::Model m = lda::fit(d.X, d.labels);

    std::normal_distribution<double> probe(0.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        VectorXd x(4);
        for (int j = 0; j < 4; ++j) x(j) = probe(rng);
        VectorXd s = lda::score(m, x);

        int best_label = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < m.n_groups(); ++g) {
            double dist =
                (s - m.centroids.row(static_cast<Eigen::Index>(g)).transpose()).norm();
            if (dist < best_dist) {
                best_dist = dist;
                best_label = m.group_labels[g];
            }
        }
        REQUIRE(lda::classify(m, x) == best_label);
    }
}

TEST_CASE("f statistic reproduces the published table rows") {
    CHECK(lda::f_statistic_from_lambda(0.256, 250, 5) ==
          testutil::within(178.008, 0.01));
    CHECK(lda::f_statistic_from_lambda(0.485, 250, 5) ==
          testutil::within(65.034, 0.01));
    CHECK(lda::f_statistic_from_lambda(0.773, 250, 5) ==
          testutil::within(17.986, 0.01));
    CHECK(lda::f_statistic_from_lambda(1.0, 250, 5) == 0.0);
}

TEST_CASE("f statistic domain checks") {
    CHECK_THROWS_AS(lda::f_statistic_from_lambda(0.0, 250, 5), DomainError);
    CHECK_THROWS_AS(lda::f_statistic_from_lambda(-0.2, 250, 5), DomainError);
    CHECK_THROWS_AS(lda::f_statistic_from_lambda(1.2, 250, 5), DomainError);
    CHECK_THROWS_AS(lda::f_statistic_from_lambda(0.5, 250, 1), DomainError);
    CHECK_THROWS_AS(lda::f_statistic_from_lambda(0.5, 5, 5), DomainError);
}

TEST_CASE("univariate wilks on equal group means is inert") {
    MatrixXd X(6, 1);
    X << 1, 2, 3, 1, 2, 3;
    lda::UnivariateStats s = lda::wilks_univariate(X, {1, 1, 1, 2, 2, 2}, 0);
    CHECK(s.wilks_lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.f_stat == testutil::within(0.0, 1e-12));
    CHECK(s.p_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("univariate wilks matches hand computation and quadrature") {
    // Three groups of five, one variable, moderate separation.
    std::mt19937_64 rng(305);
    VectorXd c1(1), c2(1), c3(1);
    c1 << 0.0;
    c2 << 1.2;
    c3 << 2.1;
    LabeledData d = clusters(rng, {c1, c2, c3}, 15, 1.0);
    lda::UnivariateStats s = lda::wilks_univariate(d.X, d.labels, 0);

    // Hand route: SS decomposition.
    double grand = d.X.col(0).mean();
    double ss_total = 0.0, ss_within = 0.0;
    for (int g = 1; g <= 3; ++g) {
        double mean = 0.0;
        int count = 0;
        for (Eigen::Index i = 0; i < d.X.rows(); ++i)
            if (d.labels[static_cast<std::size_t>(i)] == g) {
                mean += d.X(i, 0);
                ++count;
            }
        mean /= count;
        for (Eigen::Index i = 0; i < d.X.rows(); ++i)
            if (d.labels[static_cast<std::size_t>(i)] == g)
                ss_within += (d.X(i, 0) - mean) * (d.X(i, 0) - mean);
    }
    for (Eigen::Index i = 0; i < d.X.rows(); ++i)
        ss_total += (d.X(i, 0) - grand) * (d.X(i, 0) - grand);

    double lambda = ss_within / ss_total;
    CHECK(s.wilks_lambda == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(s.f_stat ==
          doctest::Approx((1.0 - lambda) / lambda * (45.0 - 3.0) / 2.0).epsilon(1e-12));
    CHECK(s.p_value ==
          testutil::within(oracle::f_upper_tail(s.f_stat, 2.0, 42.0), 1e-6));

    MatrixXd constant = MatrixXd::Zero(6, 1);
    CHECK_THROWS_AS(lda::wilks_univariate(constant, {1, 1, 1, 2, 2, 2}, 0),
                    DegenerateDataError);
}

TEST_CASE("canonical correlations reproduce the published rows") {
    CHECK(lda::canonical_correlation(5.717) == testutil::within(0.923, 5e-4));
    CHECK(lda::canonical_correlation(0.952) == testutil::within(0.698, 5e-4));
    CHECK(lda::canonical_correlation(0.146) == testutil::within(0.357, 5e-4));
    CHECK(lda::canonical_correlation(0.0) == 0.0);
    CHECK_THROWS_AS(lda::canonical_correlation(-0.1), DomainError);
}

TEST_CASE("canonical correlation grows with the eigenvalue") {
    double prev = -1.0;
    for (double ev = 0.0; ev < 8.0; ev += 0.25) {
        double cc = lda::canonical_correlation(ev);
        CHECK(cc > prev);
        CHECK(cc < 1.0);
        prev = cc;
    }
}

TEST_CASE("variance percentages reproduce the published rows and sum to 100") {
    VectorXd ev(4);
    ev << 5.717, 0.952, 0.146, 0.084;
    VectorXd pct = lda::variance_percentages(ev);
    CHECK(pct(0) == testutil::within(82.9, 0.1));
    CHECK(pct(1) == testutil::within(13.8, 0.1));
    CHECK(pct(2) == testutil::within(2.1, 0.1));
    CHECK(pct(3) == testutil::within(1.2, 0.1));
    CHECK(pct.sum() == testutil::within(100.0, 1e-6));

    std::mt19937_64 rng(306);
    std::uniform_real_distribution<double> mag(0.01, 9.0);
    for (int trial = 0; trial < 25; ++trial) {
        VectorXd random_ev(4);
        for (int k = 0; k < 4; ++k) random_ev(k) = mag(rng);
        CHECK(lda::variance_percentages(random_ev).sum() ==
              testutil::within(100.0, 1e-6));
    }
}

TEST_CASE("classification commutes with shared affine feature maps") {
    std::mt19937_64 rng(307);
    std::vector<VectorXd> centers;
    for (int g = 0; g < 5; ++g) {
        VectorXd c(3);
        c << 12.0 * g, 7.0 * (4 - g), 3.0 * g;
        centers.push_back(c);
    }
    LabeledData d = clusters(rng, centers, 20, 1.0);
    lda::Model base = lda::fit(d.X, d.labels);

    MatrixXd A(3, 3);
    A << 2.0, 0.3, 0.0, -0.1, 1.5, 0.2, 0.0, 0.4, 0.8;  // invertible, well-conditioned
    VectorXd b(3);
    b << 5.0, -2.0, 11.0;
    MatrixXd Xt = (d.X * A.transpose()).rowwise() + b.transpose();
    lda::Model refit = lda::fit(Xt, d.labels);

    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
        VectorXd x = d.X.row(i).transpose();
        VectorXd xt = A * x + b;
        REQUIRE(lda::classify(base, x) == lda::classify(refit, xt));
    }
}

TEST_CASE("structure of a single variable against its own score is unity") {
    MatrixXd X(6, 1);
    X << 0.0, 1.1, 0.4, 9.5, 10.2, 10.9;
    lda::Model m = lda::fit(X, {1, 1, 1, 2, 2, 2});
    REQUIRE(m.structure.rows() == 1);
    REQUIRE(m.structure.cols() == 1);
    CHECK(m.structure(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("structure matches a direct pooled-correlation oracle") {
    MatrixXd X(6, 2);
    X << 1.0, 0.2, 2.0, -0.1, 1.5, 0.4, 6.0, 1.1, 7.2, 0.9, 6.6, 1.4;
    std::vector<int> labels{1, 1, 1, 2, 2, 2};
    lda::Model m = lda::fit(X, labels);
    REQUIRE(m.n_functions() == 1);

    VectorXd scores(6);
    for (Eigen::Index i = 0; i < 6; ++i) scores(i) = lda::score(m, VectorXd(X.row(i).transpose()))(0);

    for (int j = 0; j < 2; ++j) {
        double num = 0.0, var_x = 0.0, var_s = 0.0;
        for (int g = 1; g <= 2; ++g) {
            double mx = 0.0, ms = 0.0;
            int count = 0;
            for (Eigen::Index i = 0; i < 6; ++i)
                if (labels[static_cast<std::size_t>(i)] == g) {
                    mx += X(i, j);
                    ms += scores(i);
                    ++count;
                }
            mx /= count;
            ms /= count;
            for (Eigen::Index i = 0; i < 6; ++i)
                if (labels[static_cast<std::size_t>(i)] == g) {
                    num += (X(i, j) - mx) * (scores(i) - ms);
                    var_x += (X(i, j) - mx) * (X(i, j) - mx);
                    var_s += (scores(i) - ms) * (scores(i) - ms);
                }
        }
        double expected = num / std::sqrt(var_x * var_s);
        CHECK(m.structure(j, 0) == testutil::within(expected, 1e-9));
    }
}

TEST_CASE("a pure-noise variable loads weakly") {
    std::mt19937_64 rng(308);
    std::normal_distribution<double> noise(0.0, 1.0);
    MatrixXd X(300, 2);
    std::vector<int> labels;
    for (int i = 0; i < 300; ++i) {
        int g = i / 100 + 1;
        X(i, 0) = 4.0 * g + noise(rng);
        X(i, 1) = noise(rng);  // carries no group information
        labels.push_back(g);
    }
    lda::Model m = lda::fit(X, labels);
    REQUIRE(m.n_functions() == 2);
    // All separation lives in the first function; the trailing one is noise.
    CHECK(m.eigenvalues(1) < 0.05 * m.eigenvalues(0));
    CHECK(std::abs(m.structure(0, 0)) > 0.9);
    CHECK(std::abs(m.structure(1, 0)) < 0.1);
}

TEST_CASE("model file round-trips exactly") {
    testcorpus::Corpus corpus = testcorpus::build(25, 309);
    lda::Model m = lda::fit(corpus.features);

    lda::Model back = lda::parse_model(serialize_model(m));
    CHECK(back.coefficients == m.coefficients);
    CHECK(back.constants == m.constants);
    CHECK(back.centroids == m.centroids);
    CHECK(back.eigenvalues == m.eigenvalues);
    CHECK(back.variance_pct == m.variance_pct);
    CHECK(back.canonical_correlations == m.canonical_correlations);
    CHECK(back.structure == m.structure);
    CHECK(back.group_labels == m.group_labels);
    CHECK(back.group_counts == m.group_counts);
    CHECK(back.p == m.p);
    CHECK(back.regularization == m.regularization);
    CHECK(back.resubstitution_accuracy == m.resubstitution_accuracy);
    CHECK(back.warnings == m.warnings);

    auto path = std::filesystem::temp_directory_path() / "rfcount_model_io_test.txt";
    lda::save_model(m, path);
    lda::Model loaded = lda::load_model(path);
    CHECK(loaded.coefficients == m.coefficients);
    std::filesystem::remove(path);
}

TEST_CASE("model parser rejects damage") {
    testcorpus::Corpus corpus = testcorpus::build(25, 310);
    std::string text = serialize_model(lda::fit(corpus.features));

    CHECK_THROWS_AS(lda::parse_model("bogus-header 1\n"), FormatError);
    CHECK_THROWS_AS(lda::parse_model(text.substr(0, text.size() / 2)), FormatError);
    CHECK_THROWS_AS(lda::parse_model(""), FormatError);
}

TEST_CASE("loading guards the canonical shape unless told otherwise") {
    MatrixXd X(8, 2);
    X << 0, 0, 1, 0, 0, 1, 1, 1, 10, 10, 11, 10, 10, 11, 11, 11;
    lda::Model small = lda::fit(X, {1, 1, 1, 1, 2, 2, 2, 2});
    std::string text = serialize_model(small);
    CHECK_THROWS_AS(lda::parse_model(text), DimensionError);
    lda::Model loaded = lda::parse_model(text, true);
    CHECK(loaded.p == 2);
    CHECK(loaded.n_groups() == 2);
}

TEST_CASE("fit input validation") {
    MatrixXd one_group(4, 2);
    one_group << 1, 2, 3, 4, 5, 6, 7, 8;
    CHECK_THROWS_AS(lda::fit(one_group, {1, 1, 1, 1}), TrainingError);

    MatrixXd tiny(3, 2);
    tiny << 1, 2, 3, 4, 5, 6;
    CHECK_THROWS_AS(lda::fit(tiny, {1, 1, 2}), TrainingError);

    MatrixXd identical = MatrixXd::Ones(8, 2);
    CHECK_THROWS_AS(lda::fit(identical, {1, 1, 1, 1, 2, 2, 2, 2}), DegenerateDataError);

    MatrixXd mismatch(4, 2);
    mismatch << 1, 2, 3, 4, 5, 6, 7, 8;
    CHECK_THROWS_AS(lda::fit(mismatch, {1, 1, 2}), DimensionError);
}

TEST_CASE("small samples over many variables warn") {
    std::mt19937_64 rng(311);
    std::normal_distribution<double> noise(0.0, 1.0);
    MatrixXd X(10, 10);
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        int g = i < 5 ? 1 : 2;
        for (int j = 0; j < 10; ++j) X(i, j) = 5.0 * g + noise(rng);
        labels.push_back(g);
    }
    lda::Model m = lda::fit(X, labels);
    CHECK(!m.warnings.empty());
}

TEST_CASE("dataset adapter requires labels") {
    CHECK_THROWS_AS(lda::to_matrix({}), EmptyInputError);
    EventFeatureVector unlabeled;
    CHECK_THROWS_AS(lda::to_matrix({unlabeled}), ConfigError);

    testcorpus::Corpus corpus = testcorpus::build(15, 312);
    auto [X, labels] = lda::to_matrix(corpus.features);
    CHECK(X.rows() == static_cast<Eigen::Index>(corpus.features.size()));
    CHECK(X.cols() == 10);
    lda::Model via_matrix = lda::fit(X, labels);
    lda::Model via_dataset = lda::fit(corpus.features);
    CHECK(via_matrix.coefficients == via_dataset.coefficients);
    CHECK(via_matrix.resubstitution_accuracy == via_dataset.resubstitution_accuracy);
}

}  // TEST_SUITE
