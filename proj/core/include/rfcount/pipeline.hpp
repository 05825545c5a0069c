#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfcount/detect.hpp"
#include "rfcount/features.hpp"
#include "rfcount/lda.hpp"
#include "rfcount/synth.hpp"
#include "rfcount/trace.hpp"

namespace rfcount {

struct DetectorConfig {
    DetectorMethod method = DetectorMethod::std_threshold;
    std::size_t window = 10;
    double prob_threshold = 0.3;
    double std_threshold = 2.0;
    std::size_t min_duration = 3;
    std::size_t merge_gap = 2;
    std::size_t pairing_window = 30;
};

struct CountConfig {
    DetectorConfig detector;
    /// Receivers forming the sensing zone, near-to-far; empty means every
    /// receiver of the trace in its stored order.  Two receivers form one
    /// link pair; three are processed as two pairs sharing the middle
    /// receiver.
    std::vector<std::string> receivers;
    /// When set, events are annotated with start_index / period_samples and
    /// the report carries per-period head counts.
    std::optional<std::size_t> period_samples;
};

struct CountedEvent {
    PairedEvent pair;
    EventFeatureVector features;  // unlabeled
    int predicted_group = 0;
    std::size_t period = 0;
};

struct PairReport {
    std::string receiver_a;
    std::string receiver_b;
    std::vector<CountedEvent> events;  // ordered by pair.a.start_index
    int predicted_head_count = 0;
    std::size_t discarded_a = 0;  // false positives removed by fusion
    std::size_t discarded_b = 0;
    double model_resubstitution_accuracy = 0.0;
};

/// Actual x predicted event counts.  Index g (one past the real labels) is
/// the miss bucket: row g = spurious predictions with no matching ground
/// truth, column g = ground-truth events nothing matched.
struct ConfusionMatrix {
    std::vector<int> labels;
    std::vector<std::vector<int>> counts;  // (labels.size()+1)^2

    static ConfusionMatrix zero(std::vector<int> labels);
    int total() const;
    int diagonal() const;
    double group_accuracy() const;  // diagonal / total
};

/// min(pred, actual) / max(pred, actual); 1.0 when both are zero.
double head_count_accuracy(int predicted, int actual);

struct EvalMetrics {
    ConfusionMatrix confusion;
    double group_accuracy = 0.0;
    double head_count_accuracy = 0.0;
    int predicted_head_count = 0;
    int actual_head_count = 0;
    std::size_t matched = 0;
    std::size_t unmatched_predicted = 0;
    std::size_t unmatched_actual = 0;
};

struct CountReport {
    std::vector<PairReport> pairs;   // one (2 Rx) or two (3 Rx)
    std::size_t combined_index = 0;  // pair backing the headline numbers
    std::optional<EvalMetrics> eval;
};

/// End-to-end: detection, fusion, feature extraction, classification.  With
/// three receivers, `models` may carry one model (shared) or one per pair;
/// the combined report picks the pair whose model had the higher
/// resubstitution accuracy (ties to the first pair).
CountReport run_count(const Trace& trace, const lda::Model& model, const CountConfig& config = {});
CountReport run_count(const Trace& trace, const std::vector<const lda::Model*>& models,
                      const CountConfig& config);

/// Greedy maximal-overlap matching between two span lists; returns index
/// pairs (into a, into b), each side used at most once.
std::vector<std::pair<std::size_t, std::size_t>> match_spans(const std::vector<SampleSpan>& a,
                                                             const std::vector<SampleSpan>& b);

struct LabeledSpan {
    SampleSpan span;
    int label = 0;
};

EvalMetrics evaluate_spans(const std::vector<LabeledSpan>& predicted,
                           const std::vector<LabeledSpan>& actual);

/// Evaluates a pair report against synth ground truth (receiver-1 spans).
EvalMetrics evaluate(const PairReport& report, const GroundTruth& truth);

/// Labels features[i] (paired with pairs[i]) by maximal-overlap match of the
/// receiver-1 span against ground truth; unmatched entries stay unlabeled.
void label_features(std::vector<EventFeatureVector>& features,
                    const std::vector<PairedEvent>& pairs, const GroundTruth& truth);

/// Attach evaluation results to a report (combined pair only).
void evaluate_report(CountReport& report, const GroundTruth& truth);

std::string format_report_text(const CountReport& report);
std::string serialize_report_jsonl(const CountReport& report);

/// Counted-event CSV:
/// `receiver_a,start_a,end_a,receiver_b,start_b,end_b,predicted_group,period`.
std::string serialize_counted_events(const PairReport& report);

}  // namespace rfcount
