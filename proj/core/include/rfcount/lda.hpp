#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rfcount/features.hpp"

namespace rfcount::lda {

/// Fitted Fisher discriminant model.  Rows of `coefficients` are the g-1
/// discriminant functions (unstandardized canonical coefficients), scaled so
/// each score has unit pooled within-group variance; `constants` center the
/// grand mean at score 0.
struct Model {
    Eigen::MatrixXd coefficients;            // (g-1) x p
    Eigen::VectorXd constants;               // g-1
    Eigen::MatrixXd centroids;               // g x (g-1), row order = group_labels
    Eigen::VectorXd eigenvalues;             // g-1, descending, >= 0
    Eigen::VectorXd variance_pct;            // g-1, sums to 100
    Eigen::VectorXd canonical_correlations;  // g-1, in [0, 1)
    Eigen::MatrixXd structure;               // p x (g-1) discriminant loadings
    std::vector<int> group_labels;           // g, ascending
    std::vector<int> group_counts;           // g
    std::size_t p = 0;                       // number of variables
    double regularization = 0.0;             // ridge added to S_w, 0 when none
    double resubstitution_accuracy = 0.0;
    std::vector<std::string> warnings;

    std::size_t n_groups() const { return group_labels.size(); }
    std::size_t n_functions() const { return static_cast<std::size_t>(coefficients.rows()); }
};

/// One variable's test of equality of group means.
struct UnivariateStats {
    double wilks_lambda = 1.0;
    double f_stat = 0.0;
    double p_value = 1.0;
};

/// Rows of X are observations.  Requires >= 2 groups, every group >= 2
/// samples (TrainingError otherwise); identical samples throughout give
/// DegenerateDataError.  N <= p only warns.
Model fit(const Eigen::MatrixXd& X, const std::vector<int>& labels);
Model fit(const std::vector<EventFeatureVector>& dataset);

/// D_k = sum_j coefficients(k, j) * x_j + constants(k).
Eigen::VectorXd score(const Model& model, const Eigen::VectorXd& x);
Eigen::VectorXd score(const Model& model, const EventFeatureVector& x);

/// Label of the centroid nearest to score(model, x); ties break toward the
/// smaller group label.
int classify(const Model& model, const Eigen::VectorXd& x);
int classify(const Model& model, const EventFeatureVector& x);

/// Wilks' lambda = SS_within / SS_total for one variable, with the one-way
/// F statistic at (g-1, N-g) degrees of freedom and its p-value.
UnivariateStats wilks_univariate(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                 std::size_t variable);
std::vector<UnivariateStats> univariate_table(const Eigen::MatrixXd& X,
                                              const std::vector<int>& labels);

/// F = ((1 - lambda) / lambda) * ((N - g) / (g - 1)).
double f_statistic_from_lambda(double lambda, std::size_t n, std::size_t g);

/// sqrt(lambda / (1 + lambda)).
double canonical_correlation(double eigenvalue);

Eigen::VectorXd variance_percentages(const Eigen::VectorXd& eigenvalues);

/// Dataset adapter: feature rows + labels.  Every vector must be labeled.
std::pair<Eigen::MatrixXd, std::vector<int>> to_matrix(
    const std::vector<EventFeatureVector>& dataset);

/// Self-describing versioned text format.  Loading enforces the canonical
/// shape p = 10, g = 5 unless allow_any_dims is set; wrong magic or a
/// truncated file throws FormatError.
std::string serialize_model(const Model& model);
Model parse_model(std::string_view text, bool allow_any_dims = false);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path, bool allow_any_dims = false);

}  // namespace rfcount::lda
