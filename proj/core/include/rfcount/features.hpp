#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rfcount/detect.hpp"

namespace rfcount {

inline constexpr std::size_t kNumFeatures = 10;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "r1_mean",     "r2_mean",     "r1_std",  "r2_std",  "r1_cv",
    "r2_cv",       "r1_duration", "r2_duration", "r1_area", "r2_area"};

/// The 10 independent variables of one paired event, computed over the
/// per-sample window-std series inside each receiver's event.
struct EventFeatureVector {
    double r1_mean = 0.0, r2_mean = 0.0;
    double r1_std = 0.0, r2_std = 0.0;
    double r1_cv = 0.0, r2_cv = 0.0;
    double r1_duration = 0.0, r2_duration = 0.0;  // samples
    double r1_area = 0.0, r2_area = 0.0;          // dB * samples
    std::optional<int> label;                     // group size in [1, 5]
    bool degenerate = false;                      // CV guard tripped

    std::array<double, kNumFeatures> values() const {
        return {r1_mean, r2_mean,     r1_std,      r2_std,  r1_cv,
                r2_cv,   r1_duration, r2_duration, r1_area, r2_area};
    }

    bool operator==(const EventFeatureVector&) const = default;
};

/// Per receiver: mean/std/CV of the event's std series, duration in
/// samples, and trapezoidal area under the series (unit spacing).  The pair
/// convention is a = receiver 1, b = receiver 2.  Throws Error when a slice
/// is empty (segmentation never emits that).
EventFeatureVector extract_features(const PairedEvent& pair);

struct GroupMeans {
    std::vector<int> labels;                              // ascending
    std::vector<std::array<double, kNumFeatures>> means;  // one row per label
};

/// Per-group per-variable means.  Every vector must be labeled with a group
/// in [1, 5]; when required_labels is non-empty, each of those labels must
/// appear in the dataset (an absent one throws TrainingError naming it).
GroupMeans group_means(const std::vector<EventFeatureVector>& dataset,
                       const std::set<int>& required_labels = {});

/// Feature dataset CSV with header
/// `label,r1_mean,r2_mean,r1_std,r2_std,r1_cv,r2_cv,r1_duration,r2_duration,r1_area,r2_area`;
/// an empty label field marks an unlabeled vector.
std::string serialize_features(const std::vector<EventFeatureVector>& dataset);
std::vector<EventFeatureVector> parse_features(std::string_view text);

}  // namespace rfcount
