#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rfcount/synth.hpp"
#include "rfcount/trace.hpp"

namespace rfcount {

/// Differences between consecutively received packets:
/// values[k] = rssi(p_{k+1}) - rssi(p_k).  Lost packets simply shorten the
/// series; no interpolation.
struct FluctuationSeries {
    std::string aligned_to;  // receiver_id
    std::vector<double> values;
};

/// Sliding-window statistics at one position of the fluctuation series.
/// index is the absolute fluctuation index of the window's last element, so
/// the first entry of a size-n scan carries index n-1 (warm-up: earlier
/// positions get no decision).
struct WindowStats {
    std::size_t index = 0;
    double mean = 0.0;
    double std = 0.0;
    double prob_in_band = 0.0;

    bool operator==(const WindowStats&) const = default;
};

enum class DetectorMethod { probability, std_threshold };

std::string_view to_string(DetectorMethod method);
DetectorMethod detector_method_from_string(std::string_view name);

/// A maximal run of movement-positive window decisions on one receiver.
/// start_index/end_index are inclusive absolute fluctuation indices;
/// window_stats_slice holds the per-position stats inside the run.
struct DetectionEvent {
    std::string receiver_id;
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    DetectorMethod method = DetectorMethod::std_threshold;
    std::vector<WindowStats> window_stats_slice;

    std::size_t duration() const { return end_index - start_index + 1; }
    bool operator==(const DetectionEvent&) const = default;
};

struct PairedEvent {
    DetectionEvent a;  // near receiver
    DetectionEvent b;  // far receiver

    bool operator==(const PairedEvent&) const = default;
};

struct FusionResult {
    std::vector<PairedEvent> pairs;            // ordered by a.start_index
    std::vector<DetectionEvent> discarded_a;   // false positives, per input side
    std::vector<DetectionEvent> discarded_b;
};

/// Throws InsufficientDataError for a stream of fewer than 2 samples.
FluctuationSeries fluctuations(const ReceiverStream& stream);

/// Mean and sample standard deviation (divisor n-1) over every length-n
/// window, plus the probability-in-band statistic.  Throws ConfigError for
/// n < 2, InsufficientDataError when the series is shorter than n.
std::vector<WindowStats> window_stats(const FluctuationSeries& f, std::size_t n);

/// P(X in [-1, 1]) for X ~ N(mean, std^2); a point mass when std == 0.
/// Throws DomainError for negative std.
double prob_in_band(double mean, double std);

/// Movement-positive iff prob_in_band < threshold (strictly).
std::vector<bool> detect_probability(const std::vector<WindowStats>& stats,
                                     double threshold = 0.3);

/// Movement-positive iff std > threshold (strictly).
std::vector<bool> detect_std(const std::vector<WindowStats>& stats, double threshold = 2.0);

std::vector<bool> detect(const std::vector<WindowStats>& stats, DetectorMethod method,
                         double prob_threshold = 0.3, double std_threshold = 2.0);

/// Inclusive positive run over positions of a decision vector.
struct IndexRun {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin + 1; }
    bool operator==(const IndexRun&) const = default;
};

/// Maximal positive runs; runs separated by at most merge_gap negatives are
/// merged first, then merged runs shorter than min_duration are dropped.
/// Positions are indices into `decisions`.
std::vector<IndexRun> segment_runs(const std::vector<bool>& decisions, std::size_t min_duration,
                                   std::size_t merge_gap);

/// segment_runs lifted to absolute indices: runs over `decisions` (aligned
/// one-to-one with `stats`) become DetectionEvents carrying their stats
/// slice and stats[pos].index endpoints.
std::vector<DetectionEvent> segment_events(const std::vector<WindowStats>& stats,
                                           const std::vector<bool>& decisions,
                                           DetectorMethod method, std::string receiver_id,
                                           std::size_t min_duration = 3, std::size_t merge_gap = 2);

/// Cross-receiver false-positive removal.  Events are compatible when their
/// index spans overlap or their starts differ by at most pairing_window;
/// greedy nearest-start matching pairs them, anything unmatched is
/// discarded.  Conservation: pairs + discarded = inputs.
FusionResult fuse_receivers(std::vector<DetectionEvent> events_a,
                            std::vector<DetectionEvent> events_b,
                            std::size_t pairing_window = 30);

/// Detection error rate per window size, scored against synth ground truth
/// on decision-pure windows: a window wholly inside an active span must be
/// movement-positive, a window wholly outside must be negative, and windows
/// straddling a boundary are excluded.
struct SweepResult {
    std::size_t n = 0;
    double error_rate = 0.0;
    std::size_t evaluated = 0;
    std::size_t errors = 0;
};

std::vector<SweepResult> window_sweep(const Trace& trace, const GroundTruth& truth,
                                      const std::vector<std::size_t>& n_values,
                                      DetectorMethod method = DetectorMethod::std_threshold,
                                      double prob_threshold = 0.3, double std_threshold = 2.0);

/// Argmin of error rate; ties go to the smaller window.
std::size_t best_window(const std::vector<SweepResult>& results);

/// Decision CSV: `index,mean,std,prob,decision`, shortest round-trip
/// float formatting.
struct DecisionSeries {
    std::vector<WindowStats> stats;
    std::vector<bool> decisions;
};

std::string serialize_decisions(const std::vector<WindowStats>& stats,
                                const std::vector<bool>& decisions);
DecisionSeries parse_decisions(std::string_view text);

/// Event CSV: `receiver_id,start_index,end_index,method` (stats slices are
/// not serialized; reattach from a decision CSV with attach_stats_slice).
std::string serialize_events(const std::vector<DetectionEvent>& events);
std::vector<DetectionEvent> parse_events(std::string_view text);
void attach_stats_slice(DetectionEvent& event, const std::vector<WindowStats>& stats);

/// Pair CSV: `receiver_a,start_a,end_a,receiver_b,start_b,end_b`.
std::string serialize_pairs(const std::vector<PairedEvent>& pairs);
std::vector<PairedEvent> parse_pairs(std::string_view text);

}  // namespace rfcount
