#include "rfcount/features.hpp"

#include <cmath>
#include <map>

#include "rfcount/errors.hpp"
#include "text_util.hpp"

namespace rfcount {

namespace {

constexpr std::string_view kFeatureCsvHeader =
    "label,r1_mean,r2_mean,r1_std,r2_std,r1_cv,r2_cv,r1_duration,r2_duration,r1_area,r2_area";
constexpr double kCvMeanGuard = 1e-9;

struct SideFeatures {
    double mean, std, cv, duration, area;
    bool degenerate;
};

SideFeatures side_features(const DetectionEvent& event) {
    const auto& slice = event.window_stats_slice;
    if (slice.empty())
        throw Error("event [" + text::format_uint(event.start_index) + ", " +
                    text::format_uint(event.end_index) + "] on " + event.receiver_id +
                    " carries no window stats");

    double sum = 0.0;
    for (const WindowStats& ws : slice) sum += ws.std;
    auto len = static_cast<double>(slice.size());
    double mean = sum / len;

    double ss = 0.0;
    for (const WindowStats& ws : slice) {
        double d = ws.std - mean;
        ss += d * d;
    }
    double sd = slice.size() > 1 ? std::sqrt(ss / (len - 1.0)) : 0.0;

    SideFeatures out;
    out.mean = mean;
    out.std = sd;
    out.degenerate = std::fabs(mean) < kCvMeanGuard;
    out.cv = out.degenerate ? 0.0 : sd / mean;
    out.duration = static_cast<double>(event.duration());
    // Trapezoid with unit spacing: interior points count fully, endpoints half.
    out.area = sum - (slice.front().std + slice.back().std) / 2.0;
    return out;
}

}  // namespace

EventFeatureVector extract_features(const PairedEvent& pair) {
    SideFeatures r1 = side_features(pair.a);
    SideFeatures r2 = side_features(pair.b);

    EventFeatureVector v;
    v.r1_mean = r1.mean;
    v.r2_mean = r2.mean;
    v.r1_std = r1.std;
    v.r2_std = r2.std;
    v.r1_cv = r1.cv;
    v.r2_cv = r2.cv;
    v.r1_duration = r1.duration;
    v.r2_duration = r2.duration;
    v.r1_area = r1.area;
    v.r2_area = r2.area;
    v.degenerate = r1.degenerate || r2.degenerate;
    return v;
}

GroupMeans group_means(const std::vector<EventFeatureVector>& dataset,
                       const std::set<int>& required_labels) {
    if (dataset.empty()) throw EmptyInputError("feature dataset is empty");

    std::map<int, std::pair<std::array<double, kNumFeatures>, std::size_t>> acc;
    for (const EventFeatureVector& v : dataset) {
        if (!v.label) throw ConfigError("unlabeled feature vector in group_means");
        if (*v.label < 1 || *v.label > 5)
            throw ConfigError("group label outside [1, 5]: " + text::format_int(*v.label));
        auto& [sums, count] = acc[*v.label];
        auto vals = v.values();
        for (std::size_t j = 0; j < kNumFeatures; ++j) sums[j] += vals[j];
        ++count;
    }
    for (int label : required_labels) {
        if (!acc.count(label))
            throw TrainingError("group " + text::format_int(label) + " is empty");
    }

    GroupMeans out;
    for (const auto& [label, entry] : acc) {
        const auto& [sums, count] = entry;
        std::array<double, kNumFeatures> mean{};
        for (std::size_t j = 0; j < kNumFeatures; ++j)
            mean[j] = sums[j] / static_cast<double>(count);
        out.labels.push_back(label);
        out.means.push_back(mean);
    }
    return out;
}

std::string serialize_features(const std::vector<EventFeatureVector>& dataset) {
    std::string out(kFeatureCsvHeader);
    out += '\n';
    for (const EventFeatureVector& v : dataset) {
        if (v.label) out += text::format_int(*v.label);
        for (double x : v.values()) {
            out += ',';
            out += text::format_double(x);
        }
        out += '\n';
    }
    return out;
}

std::vector<EventFeatureVector> parse_features(std::string_view text) {
    std::vector<EventFeatureVector> dataset;
    bool any = false;
    bool saw_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = (eol == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = text::trim(text::strip_cr(raw));
        if (line.empty()) {
            if (eol == std::string_view::npos) break;
            continue;
        }
        auto fail = [&](const std::string& what) -> void { throw ParseError(what, line_no); };
        if (line.front() == '#') {
            if (any || saw_header) fail("comment line after data");
            continue;
        }
        if (!any && !saw_header && line == kFeatureCsvHeader) {
            saw_header = true;
            continue;
        }

        auto fields = text::split(line, ',');
        if (fields.size() != kNumFeatures + 1)
            fail("expected " + text::format_uint(kNumFeatures + 1) + " fields, got " +
                 text::format_uint(fields.size()));

        EventFeatureVector v;
        std::string_view label = text::trim(fields[0]);
        if (!label.empty()) {
            auto l = text::parse_number<int>(label);
            if (!l) fail("invalid label field '" + std::string(label) + "'");
            if (*l < 1 || *l > 5)
                throw ConfigError("group label outside [1, 5]: " + text::format_int(*l));
            v.label = *l;
        }
        std::array<double, kNumFeatures> vals{};
        for (std::size_t j = 0; j < kNumFeatures; ++j) {
            auto x = text::parse_number<double>(fields[j + 1]);
            if (!x)
                fail("invalid " + std::string(kFeatureNames[j]) + " field '" +
                     std::string(text::trim(fields[j + 1])) + "'");
            vals[j] = *x;
        }
        v.r1_mean = vals[0];
        v.r2_mean = vals[1];
        v.r1_std = vals[2];
        v.r2_std = vals[3];
        v.r1_cv = vals[4];
        v.r2_cv = vals[5];
        v.r1_duration = vals[6];
        v.r2_duration = vals[7];
        v.r1_area = vals[8];
        v.r2_area = vals[9];
        dataset.push_back(v);
        any = true;
    }
    if (!any && !saw_header) throw EmptyInputError("feature file is empty");
    return dataset;
}

}  // namespace rfcount
