#include "rfcount/lda.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rfcount/errors.hpp"
#include "rfcount/stats_math.hpp"
#include "rfcount/trace.hpp"
#include "text_util.hpp"

namespace rfcount::lda {

namespace {

constexpr std::string_view kMagic = "rfcount-lda 1";
constexpr double kConditionLimit = 1e12;

struct Grouping {
    std::vector<int> labels;             // distinct, ascending
    std::vector<int> counts;
    std::vector<std::vector<int>> rows;  // row indices per group
};

Grouping group_rows(const std::vector<int>& labels, Eigen::Index n) {
    if (labels.size() != static_cast<std::size_t>(n))
        throw DimensionError("label count does not match observation count");
    std::map<int, std::vector<int>> by_label;
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_label[labels[i]].push_back(static_cast<int>(i));
    Grouping g;
    for (auto& [label, rows] : by_label) {
        g.labels.push_back(label);
        g.counts.push_back(static_cast<int>(rows.size()));
        g.rows.push_back(std::move(rows));
    }
    return g;
}

void apply_sign_convention(Eigen::VectorXd& v) {
    double tol = 1e-12 * v.norm();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (std::fabs(v(j)) > tol) {
            if (v(j) < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

Model fit(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
    const Eigen::Index N = X.rows();
    const Eigen::Index p = X.cols();
    if (N == 0 || p == 0) throw EmptyInputError("empty training matrix");

    Grouping grouping = group_rows(labels, N);
    const std::size_t g = grouping.labels.size();
    if (g < 2) throw TrainingError("need at least 2 groups to fit a discriminant");
    for (std::size_t i = 0; i < g; ++i) {
        if (grouping.counts[i] < 2)
            throw TrainingError("group " + text::format_int(grouping.labels[i]) +
                                " has fewer than 2 samples");
    }

    Model model;
    model.p = static_cast<std::size_t>(p);
    model.group_labels = grouping.labels;
    model.group_counts = grouping.counts;
    if (N <= p)
        model.warnings.push_back("fewer observations than variables; estimates may be unstable");

    Eigen::VectorXd grand = X.colwise().mean().transpose();
    Eigen::MatrixXd group_mean(g, p);
    for (std::size_t i = 0; i < g; ++i) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(p);
        for (int r : grouping.rows[i]) m += X.row(r).transpose();
        group_mean.row(static_cast<Eigen::Index>(i)) =
            (m / static_cast<double>(grouping.counts[i])).transpose();
    }

    Eigen::MatrixXd Sw = Eigen::MatrixXd::Zero(p, p);
    Eigen::MatrixXd Sb = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t i = 0; i < g; ++i) {
        for (int r : grouping.rows[i]) {
            Eigen::VectorXd d = X.row(r).transpose() - group_mean.row(static_cast<Eigen::Index>(i)).transpose();
            Sw.noalias() += d * d.transpose();
        }
        Eigen::VectorXd d = group_mean.row(static_cast<Eigen::Index>(i)).transpose() - grand;
        Sb.noalias() += static_cast<double>(grouping.counts[i]) * d * d.transpose();
    }

    if (Sw.cwiseAbs().maxCoeff() == 0.0 && Sb.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateDataError("all training samples are identical");
    if (Sw.trace() <= 0.0) throw DegenerateDataError("zero within-group scatter");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sw_eig(Sw);
    if (sw_eig.info() != Eigen::Success) throw TrainingError("within-scatter eigensolver failed");
    double ev_min = sw_eig.eigenvalues()(0);
    double ev_max = sw_eig.eigenvalues()(p - 1);
    double cond = ev_min <= 0.0 ? std::numeric_limits<double>::infinity() : ev_max / ev_min;

    Eigen::MatrixXd Sw_reg = Sw;
    if (cond > kConditionLimit) {
        double eps = 1e-6 * Sw.trace() / static_cast<double>(p);
        Sw_reg += eps * Eigen::MatrixXd::Identity(p, p);
        model.regularization = eps;
        model.warnings.push_back("within-group scatter near-singular; ridge " +
                                 text::format_double(eps) + " added");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Sb, Sw_reg,
                                                                  Eigen::ComputeEigenvectors |
                                                                      Eigen::Ax_lBx);
    if (ges.info() != Eigen::Success) throw TrainingError("generalized eigensolver failed");

    std::size_t m = g - 1;
    if (m > static_cast<std::size_t>(p)) {
        m = static_cast<std::size_t>(p);
        model.warnings.push_back("more groups than variables allow; functions truncated");
    }

    model.coefficients.resize(static_cast<Eigen::Index>(m), p);
    model.eigenvalues.resize(static_cast<Eigen::Index>(m));
    double score_scale = std::sqrt(static_cast<double>(N) - static_cast<double>(g));
    for (std::size_t k = 0; k < m; ++k) {
        Eigen::Index idx = p - 1 - static_cast<Eigen::Index>(k);  // solver sorts ascending
        // Solver normalizes v' * Sw_reg * v = 1; rescale so the pooled
        // within-group variance of the score, Sw/(N-g), becomes 1.
        Eigen::VectorXd v = ges.eigenvectors().col(idx) * score_scale;
        apply_sign_convention(v);
        model.coefficients.row(static_cast<Eigen::Index>(k)) = v.transpose();
        model.eigenvalues(static_cast<Eigen::Index>(k)) = std::max(0.0, ges.eigenvalues()(idx));
    }

    model.constants = -(model.coefficients * grand);
    model.centroids.resize(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < g; ++i)
        model.centroids.row(static_cast<Eigen::Index>(i)) =
            (model.coefficients * group_mean.row(static_cast<Eigen::Index>(i)).transpose() +
             model.constants)
                .transpose();

    model.variance_pct = variance_percentages(model.eigenvalues);
    model.canonical_correlations.resize(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k)
        model.canonical_correlations(static_cast<Eigen::Index>(k)) =
            canonical_correlation(model.eigenvalues(static_cast<Eigen::Index>(k)));

    // Discriminant loadings: pooled within-group correlation between each
    // variable and each score, computed from the unridged scatter.
    double dfw = static_cast<double>(N) - static_cast<double>(g);
    model.structure.resize(p, static_cast<Eigen::Index>(m));
    bool zero_variance_seen = false;
    for (std::size_t k = 0; k < m; ++k) {
        Eigen::VectorXd v = model.coefficients.row(static_cast<Eigen::Index>(k)).transpose();
        Eigen::VectorXd swv = Sw * v;
        double score_var = v.dot(swv) / dfw;
        for (Eigen::Index j = 0; j < p; ++j) {
            double var_j = Sw(j, j) / dfw;
            double denom = std::sqrt(var_j * score_var);
            if (denom > 0.0) {
                model.structure(j, static_cast<Eigen::Index>(k)) = (swv(j) / dfw) / denom;
            } else {
                model.structure(j, static_cast<Eigen::Index>(k)) = 0.0;
                zero_variance_seen = true;
            }
        }
    }
    if (zero_variance_seen)
        model.warnings.push_back("zero-variance variable; its loadings reported as 0");

    int correct = 0;
    for (Eigen::Index r = 0; r < N; ++r)
        if (classify(model, Eigen::VectorXd(X.row(r).transpose())) == labels[static_cast<std::size_t>(r)])
            ++correct;
    model.resubstitution_accuracy = static_cast<double>(correct) / static_cast<double>(N);
    return model;
}

Model fit(const std::vector<EventFeatureVector>& dataset) {
    auto [X, labels] = to_matrix(dataset);
    return fit(X, labels);
}

Eigen::VectorXd score(const Model& model, const Eigen::VectorXd& x) {
    if (model.coefficients.rows() == 0) throw Error("model is not fitted");
    if (x.size() != model.coefficients.cols())
        throw DimensionError("feature vector has " + text::format_int(x.size()) +
                             " variables, model expects " +
                             text::format_int(model.coefficients.cols()));
    return model.coefficients * x + model.constants;
}

Eigen::VectorXd score(const Model& model, const EventFeatureVector& x) {
    auto vals = x.values();
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    return score(model, v);
}

int classify(const Model& model, const Eigen::VectorXd& x) {
    if (model.centroids.rows() == 0) throw Error("model has no centroids");
    Eigen::VectorXd s = score(model, x);
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < model.centroids.rows(); ++i) {
        double d = (model.centroids.row(i).transpose() - s).squaredNorm();
        if (d < best_dist) {  // strict: ties stay with the smaller label
            best_dist = d;
            best = static_cast<int>(i);
        }
    }
    return model.group_labels[static_cast<std::size_t>(best)];
}

int classify(const Model& model, const EventFeatureVector& x) {
    auto vals = x.values();
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
    return classify(model, v);
}

UnivariateStats wilks_univariate(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                                 std::size_t variable) {
    if (variable >= static_cast<std::size_t>(X.cols()))
        throw DimensionError("variable index out of range");
    const Eigen::Index N = X.rows();
    Grouping grouping = group_rows(labels, N);
    const std::size_t g = grouping.labels.size();
    if (g < 2) throw TrainingError("need at least 2 groups");
    if (static_cast<std::size_t>(N) <= g) throw TrainingError("need more observations than groups");

    Eigen::VectorXd col = X.col(static_cast<Eigen::Index>(variable));
    double grand = col.mean();
    double ss_within = 0.0;
    double ss_total = 0.0;
    for (Eigen::Index r = 0; r < N; ++r) {
        double d = col(r) - grand;
        ss_total += d * d;
    }
    for (std::size_t i = 0; i < g; ++i) {
        double m = 0.0;
        for (int r : grouping.rows[i]) m += col(r);
        m /= static_cast<double>(grouping.counts[i]);
        for (int r : grouping.rows[i]) {
            double d = col(r) - m;
            ss_within += d * d;
        }
    }
    if (ss_total <= 0.0)
        throw DegenerateDataError("variable " + text::format_uint(variable) +
                                  " has zero total sum of squares");

    UnivariateStats stats;
    stats.wilks_lambda = std::clamp(ss_within / ss_total, 0.0, 1.0);
    if (stats.wilks_lambda == 0.0) {
        stats.f_stat = std::numeric_limits<double>::infinity();
        stats.p_value = 0.0;
    } else {
        stats.f_stat = f_statistic_from_lambda(stats.wilks_lambda, static_cast<std::size_t>(N), g);
        stats.p_value = f_upper_tail(stats.f_stat, static_cast<double>(g - 1),
                                     static_cast<double>(static_cast<std::size_t>(N) - g));
    }
    return stats;
}

std::vector<UnivariateStats> univariate_table(const Eigen::MatrixXd& X,
                                              const std::vector<int>& labels) {
    std::vector<UnivariateStats> table;
    table.reserve(static_cast<std::size_t>(X.cols()));
    for (std::size_t j = 0; j < static_cast<std::size_t>(X.cols()); ++j)
        table.push_back(wilks_univariate(X, labels, j));
    return table;
}

double f_statistic_from_lambda(double lambda, std::size_t n, std::size_t g) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw DomainError("wilks lambda must lie in (0, 1]");
    if (g < 2) throw DomainError("need at least 2 groups");
    if (n <= g) throw DomainError("need more observations than groups");
    return ((1.0 - lambda) / lambda) *
           (static_cast<double>(n - g) / static_cast<double>(g - 1));
}

double canonical_correlation(double eigenvalue) {
    if (eigenvalue < 0.0) throw DomainError("eigenvalue must be non-negative");
    return std::sqrt(eigenvalue / (1.0 + eigenvalue));
}

Eigen::VectorXd variance_percentages(const Eigen::VectorXd& eigenvalues) {
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues(i) < 0.0) throw DomainError("eigenvalues must be non-negative");
    double total = eigenvalues.sum();
    if (total <= 0.0) return Eigen::VectorXd::Zero(eigenvalues.size());
    return eigenvalues * (100.0 / total);
}

std::pair<Eigen::MatrixXd, std::vector<int>> to_matrix(
    const std::vector<EventFeatureVector>& dataset) {
    if (dataset.empty()) throw EmptyInputError("feature dataset is empty");
    Eigen::MatrixXd X(static_cast<Eigen::Index>(dataset.size()),
                      static_cast<Eigen::Index>(kNumFeatures));
    std::vector<int> labels;
    labels.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!dataset[i].label) throw ConfigError("unlabeled feature vector in training data");
        labels.push_back(*dataset[i].label);
        auto vals = dataset[i].values();
        for (std::size_t j = 0; j < kNumFeatures; ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vals[j];
    }
    return {std::move(X), std::move(labels)};
}

namespace {

void append_row(std::string& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += text::format_double(v(i));
    }
    out += '\n';
}

class LineCursor {
public:
    explicit LineCursor(std::string_view text) : text_(text) {}

    std::string_view next() {
        while (pos_ <= text_.size()) {
            std::size_t eol = text_.find('\n', pos_);
            std::string_view raw = (eol == std::string_view::npos) ? text_.substr(pos_)
                                                                   : text_.substr(pos_, eol - pos_);
            pos_ = (eol == std::string_view::npos) ? text_.size() + 1 : eol + 1;
            std::string_view line = text::strip_cr(raw);
            if (eol == std::string_view::npos && line.empty()) break;
            return line;
        }
        throw FormatError("truncated model file");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

std::vector<double> parse_value_row(std::string_view line, std::size_t expected,
                                    const char* section) {
    std::vector<double> out;
    for (std::string_view tok : text::split(text::trim(line), ' ')) {
        if (tok.empty()) continue;
        auto v = text::parse_number<double>(tok);
        if (!v) throw FormatError(std::string("invalid number in ") + section);
        out.push_back(*v);
    }
    if (out.size() != expected)
        throw FormatError(std::string(section) + ": expected " + text::format_uint(expected) +
                          " values, got " + text::format_uint(out.size()));
    return out;
}

std::string_view expect_key(std::string_view line, std::string_view key) {
    if (line.size() < key.size() || line.substr(0, key.size()) != key ||
        (line.size() > key.size() && line[key.size()] != ' '))
        throw FormatError("model file: expected '" + std::string(key) + "' section");
    return text::trim(line.substr(std::min(line.size(), key.size() + 1)));
}

Eigen::MatrixXd parse_matrix(LineCursor& cursor, std::size_t rows, std::size_t cols,
                             const char* section) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        auto vals = parse_value_row(cursor.next(), cols, section);
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = vals[c];
    }
    return m;
}

Eigen::VectorXd to_vector(const std::vector<double>& vals) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

}  // namespace

std::string serialize_model(const Model& model) {
    std::size_t g = model.n_groups();
    std::size_t m = model.n_functions();
    std::string out(kMagic);
    out += '\n';
    out += "p " + text::format_uint(model.p) + '\n';
    out += "g " + text::format_uint(g) + '\n';
    out += "m " + text::format_uint(m) + '\n';
    out += "labels";
    for (int l : model.group_labels) out += ' ' + text::format_int(l);
    out += '\n';
    out += "counts";
    for (int c : model.group_counts) out += ' ' + text::format_int(c);
    out += '\n';
    out += "regularization " + text::format_double(model.regularization) + '\n';
    out += "resubstitution_accuracy " + text::format_double(model.resubstitution_accuracy) + '\n';
    out += "coefficients\n";
    for (std::size_t k = 0; k < m; ++k)
        append_row(out, model.coefficients.row(static_cast<Eigen::Index>(k)).transpose());
    out += "constants\n";
    append_row(out, model.constants);
    out += "centroids\n";
    for (std::size_t i = 0; i < g; ++i)
        append_row(out, model.centroids.row(static_cast<Eigen::Index>(i)).transpose());
    out += "eigenvalues\n";
    append_row(out, model.eigenvalues);
    out += "variance_pct\n";
    append_row(out, model.variance_pct);
    out += "canonical_correlations\n";
    append_row(out, model.canonical_correlations);
    out += "structure\n";
    for (std::size_t j = 0; j < model.p; ++j)
        append_row(out, model.structure.row(static_cast<Eigen::Index>(j)).transpose());
    out += "warnings " + text::format_uint(model.warnings.size()) + '\n';
    for (const std::string& w : model.warnings) {
        out += w;
        out += '\n';
    }
    out += "end\n";
    return out;
}

Model parse_model(std::string_view text, bool allow_any_dims) {
    LineCursor cursor(text);
    if (cursor.next() != kMagic) throw FormatError("not a recognized model file (bad magic line)");

    Model model;
    auto p_vals = parse_value_row(expect_key(cursor.next(), "p"), 1, "p");
    auto g_vals = parse_value_row(expect_key(cursor.next(), "g"), 1, "g");
    auto m_vals = parse_value_row(expect_key(cursor.next(), "m"), 1, "m");
    auto p = static_cast<std::size_t>(p_vals[0]);
    auto g = static_cast<std::size_t>(g_vals[0]);
    auto m = static_cast<std::size_t>(m_vals[0]);
    if (p == 0 || g < 2 || m == 0 || m > g - 1)
        throw FormatError("model file: inconsistent dimensions");
    model.p = p;

    for (double v : parse_value_row(expect_key(cursor.next(), "labels"), g, "labels"))
        model.group_labels.push_back(static_cast<int>(v));
    if (!std::is_sorted(model.group_labels.begin(), model.group_labels.end()))
        throw FormatError("model file: group labels must be ascending");
    for (double v : parse_value_row(expect_key(cursor.next(), "counts"), g, "counts"))
        model.group_counts.push_back(static_cast<int>(v));
    model.regularization =
        parse_value_row(expect_key(cursor.next(), "regularization"), 1, "regularization")[0];
    model.resubstitution_accuracy = parse_value_row(
        expect_key(cursor.next(), "resubstitution_accuracy"), 1, "resubstitution_accuracy")[0];

    expect_key(cursor.next(), "coefficients");
    model.coefficients = parse_matrix(cursor, m, p, "coefficients");
    expect_key(cursor.next(), "constants");
    model.constants = to_vector(parse_value_row(cursor.next(), m, "constants"));
    expect_key(cursor.next(), "centroids");
    model.centroids = parse_matrix(cursor, g, m, "centroids");
    expect_key(cursor.next(), "eigenvalues");
    model.eigenvalues = to_vector(parse_value_row(cursor.next(), m, "eigenvalues"));
    expect_key(cursor.next(), "variance_pct");
    model.variance_pct = to_vector(parse_value_row(cursor.next(), m, "variance_pct"));
    expect_key(cursor.next(), "canonical_correlations");
    model.canonical_correlations =
        to_vector(parse_value_row(cursor.next(), m, "canonical_correlations"));
    expect_key(cursor.next(), "structure");
    model.structure = parse_matrix(cursor, p, m, "structure");

    auto n_warn =
        static_cast<std::size_t>(parse_value_row(expect_key(cursor.next(), "warnings"), 1,
                                                 "warnings")[0]);
    for (std::size_t i = 0; i < n_warn; ++i) model.warnings.emplace_back(cursor.next());
    if (cursor.next() != "end") throw FormatError("model file: missing end marker");

    if (!allow_any_dims && (model.p != kNumFeatures || g != 5))
        throw DimensionError("model has p=" + text::format_uint(model.p) + ", g=" +
                             text::format_uint(g) +
                             "; expected the canonical 10-variable 5-group shape");
    return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
    write_text_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path, bool allow_any_dims) {
    return parse_model(read_text_file(path), allow_any_dims);
}

}  // namespace rfcount::lda
